#include "bergman_limits/toeplitz.hpp"

#include <cmath>

#include "bergman_limits/pairing.hpp"
#include "bergman_limits/parallel.hpp"

namespace bl {
namespace {

// <f e_k, e_l> on the disk for a tensor-product polar rule: the angular sums collapse to
// Fourier moments F_i[m] = sum_k aw_k f(r_i e^{i t_k}) e^{i m t_k}, |m| <= d.
Eigen::MatrixXcd disk_polar_matrix(const Basis& b, const QuadratureRule& rule, const Symbol& f) {
  const PolarGrid& g = *rule.polar;
  const int d = b.max_degree();
  const auto nr = static_cast<Eigen::Index>(g.radius.size());
  const auto na = static_cast<Eigen::Index>(g.angle.size());
  Eigen::MatrixXcd fv(nr, na);
  parallel_chunks(static_cast<size_t>(nr), [&](size_t i) {
    for (Eigen::Index k = 0; k < na; ++k) {
      const cplx v = f(rule.nodes[static_cast<size_t>(i) * static_cast<size_t>(na) + static_cast<size_t>(k)]);
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
        throw Error(ErrorCode::Accuracy, "symbol is not finite at a quadrature node");
      fv(static_cast<Eigen::Index>(i), k) = v;
    }
  });
  Eigen::MatrixXcd ex(na, 2 * d + 1);
  for (Eigen::Index k = 0; k < na; ++k)
    for (int m = -d; m <= d; ++m) ex(k, m + d) = g.aweight[k] * std::polar(1.0, m * g.angle[k]);
  const Eigen::MatrixXcd moments = fv * ex;

  std::vector<double> inv(static_cast<size_t>(d) + 1);
  for (int k = 0; k <= d; ++k) inv[k] = 1.0 / b.norms()[k];
  Eigen::MatrixXd pw(nr, 2 * d + 1);
  for (Eigen::Index i = 0; i < nr; ++i) {
    pw(i, 0) = g.rweight[i];
    for (int j = 1; j <= 2 * d; ++j) pw(i, j) = pw(i, j - 1) * g.radius[i];
  }
  Eigen::MatrixXcd out(d + 1, d + 1);
  for (int l = 0; l <= d; ++l)
    for (int k = 0; k <= d; ++k) {
      cplx s = 0.0;
      for (Eigen::Index i = 0; i < nr; ++i) s += pw(i, k + l) * moments(i, k - l + d);
      out(l, k) = s * inv[k] * inv[l];
    }
  return out;
}

bool use_polar_path(const Basis& b, const QuadratureRule& rule) {
  return b.domain().kind() == DomainKind::UnitDisk && rule.polar.has_value() && rule.nu == b.ctx().nu;
}

OperatorMatrix wrap(const BasisPtr& basis, Eigen::MatrixXcd m, std::string label) {
  OperatorMatrix a;
  a.m = std::move(m);
  a.basis = basis;
  a.p = basis->ctx().p;
  a.label = std::move(label);
  return a;
}

std::shared_ptr<const Basis> padded(const BasisPtr& basis, int degree) {
  return degree == basis->max_degree() ? basis : basis->with_degree(degree);
}

// The spill is sqrt(|U e_k|^2 - captured), so rounding puts a floor near 3e-8 under it.
constexpr double kShiftSpillTarget = 1e-7;

int padding_cap(const Basis& b) { return b.domain().kind() == DomainKind::UnitDisk ? 160 : b.max_degree() + 6; }

}  // namespace

OperatorMatrix assemble_toeplitz(const BasisPtr& basis, const Symbol& f, const QuadratureRule* rule) {
  const int n = basis->size();
  if (f.is_constant()) {
    OperatorMatrix a = wrap(basis, f.constant_value() * Eigen::MatrixXcd::Identity(n, n), "T[" + f.label() + "]");
    a.words = ToeplitzWords{{f.constant_value()}, {{}}};
    return a;
  }
  const QuadratureRule& r = rule ? *rule : basis->rule();
  Eigen::MatrixXcd m;
  if (use_polar_path(*basis, r)) {
    m = disk_polar_matrix(*basis, r, f);
  } else {
    const Basis& b = *basis;
    m = pair_with_basis(b, r, n, [&](const Point& x, cplx* out) {
          const cplx fx = f(x);
          const Eigen::VectorXcd e = b.eval(x);
          for (int k = 0; k < n; ++k) out[k] = fx * e(k);
        }).m;
  }
  OperatorMatrix a = wrap(basis, std::move(m), "T[" + f.label() + "]");
  a.words = ToeplitzWords{{1.0}, {{f}}};
  return a;
}

OperatorMatrix toeplitz_algebra_element(const BasisPtr& basis, const ToeplitzWords& words) {
  if (words.coeff.size() != words.words.size())
    throw Error(ErrorCode::DimensionMismatch, "word coefficients and words differ in length");
  const int n = basis->size();
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(n, n);
  for (size_t t = 0; t < words.words.size(); ++t) {
    Eigen::MatrixXcd prod = Eigen::MatrixXcd::Identity(n, n);
    for (const auto& f : words.words[t]) prod = prod * assemble_toeplitz(basis, f).m;
    sum += words.coeff[t] * prod;
  }
  OperatorMatrix a = wrap(basis, std::move(sum), words.describe());
  a.words = words;
  return a;
}

QuadratureRule shifted_rule(const Domain& dom, double nu, const Point& z, int degree) {
  return focused_rule(dom, nu, z, degree);
}

OperatorMatrix shifted_toeplitz(const BasisPtr& basis, const Symbol& f, const Point& z) {
  const Domain& dom = basis->domain();
  if (!dom.interior(z)) throw Error(ErrorCode::OutsideDomain, "shift base point must be interior");
  if (f.is_constant()) return assemble_toeplitz(basis, f);
  const WeightContext& ctx = basis->ctx();
  const Symbol fz = f.composed(dom, z);
  const QuadratureRule rule = shifted_rule(dom, ctx.nu, ctx.p == 2.0 ? *fz.focus : z, basis->max_degree());
  if (ctx.p == 2.0) {
    OperatorMatrix a = assemble_toeplitz(basis, fz, &rule);
    a.label = "U_z T[" + f.label() + "] U_z";
    return a;
  }
  const Symbol b = bz_symbol(dom, ctx, z);
  const Eigen::MatrixXcd tb = assemble_toeplitz(basis, b, &rule).m;
  const Eigen::MatrixXcd tfb = assemble_toeplitz(basis, fz * b, &rule).m;
  OperatorMatrix a = wrap(basis, tb.partialPivLu().solve(tfb), "U_z T[" + f.label() + "] U_z");
  return a;
}

OperatorMatrix shifted_operator(const OperatorMatrix& a, const Point& z) {
  const BasisPtr& basis = a.basis;
  const Domain& dom = basis->domain();
  const int n = basis->size();
  if (a.words) {
    const ToeplitzWords& w = *a.words;
    Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(n, n);
    ToeplitzWords shifted;
    for (size_t t = 0; t < w.words.size(); ++t) {
      Eigen::MatrixXcd prod = Eigen::MatrixXcd::Identity(n, n);
      std::vector<Symbol> word;
      for (const auto& f : w.words[t]) {
        prod = prod * shifted_toeplitz(basis, f, z).m;
        word.push_back(f.composed(dom, z));
      }
      sum += w.coeff[t] * prod;
      shifted.coeff.push_back(w.coeff[t]);
      shifted.words.push_back(std::move(word));
    }
    OperatorMatrix out = wrap(basis, std::move(sum), "U_z (" + a.label + ") U_z");
    out.p = a.p;
    if (a.p == 2.0) out.words = std::move(shifted);
    return out;
  }
  const OperatorMatrix u = shift_isometry_matrix(basis, z, a.p);
  OperatorMatrix out = wrap(basis, u.m * a.m * u.m, "U_z (" + a.label + ") U_z");
  out.p = a.p;
  out.spill = u.spill;
  return out;
}

ShiftCheck shifted_toeplitz_check(const BasisPtr& basis, const Symbol& f, const Point& z) {
  const double p = basis->ctx().p;
  const int d = basis->max_degree();
  const int cap = padding_cap(*basis);
  ShiftCheck out;

  // Rows basis of degree D for U e_k, k <= `cols` degree, grown until the spill is negligible.
  auto grow = [&](const BasisPtr& cols, int start) {
    int deg = std::min(start, cap);
    for (;;) {
      BasisPtr rows = padded(basis, deg);
      ShiftBlock sb = shift_isometry_block(*rows, *cols, z, p);
      if (sb.spill < kShiftSpillTarget || deg >= cap) return std::make_pair(rows, sb);
      deg = std::min(cap, deg + 10);
    }
  };

  const BasisPtr mid = p == 2.0 ? basis : padded(basis, std::min(cap, d + 20));
  const auto [outer, right] = grow(basis, mid->max_degree() + 10);
  const Eigen::MatrixXcd t = assemble_toeplitz(outer, f).m;
  const ShiftBlock left = shift_isometry_block(*mid, *outer, z, p);
  const Eigen::MatrixXcd lhs_mid = left.m * t * right.m;  // Pi_mid U T_f U Pi_d
  out.spill = right.spill;
  out.padded_degree = outer->max_degree();

  const Domain& dom = basis->domain();
  const QuadratureRule rule = shifted_rule(dom, basis->ctx().nu, z, mid->max_degree());
  Eigen::MatrixXcd lhs, rhs;
  if (p == 2.0) {
    lhs = lhs_mid;
    rhs = assemble_toeplitz(basis, f.composed(dom, z), &rule).m;
  } else {
    const Symbol b = bz_symbol(dom, basis->ctx(), z);
    const Eigen::MatrixXcd tb = assemble_toeplitz(mid, b, &rule).m;
    lhs = tb.topRows(basis->size()) * lhs_mid;
    rhs = assemble_toeplitz(mid, f.composed(dom, z) * b, &rule).m.topLeftCorner(basis->size(), basis->size());
  }
  out.residual = spectral_norm(lhs - rhs);
  return out;
}

cplx berezin_symbol(const Domain& dom, double nu, const Symbol& f, const Point& z) {
  if (f.is_constant()) return f.constant_value();
  if (!dom.interior(z)) throw Error(ErrorCode::OutsideDomain, "Berezin transform needs an interior point");
  const Symbol fz = f.composed(dom, z);
  const QuadratureRule rule = shifted_rule(dom, nu, *fz.focus, 0);
  return integrate(rule, fz);
}

cplx berezin(const OperatorMatrix& a, const Point& z) {
  if (!a.words) return berezin_matrix(a, z);
  const BasisPtr& basis = a.basis;
  const Domain& dom = basis->domain();
  const double nu = basis->ctx().nu;
  cplx total = 0.0;
  for (size_t t = 0; t < a.words->words.size(); ++t) {
    const auto& word = a.words->words[t];
    const cplx c = a.words->coeff[t];
    if (word.empty()) {
      total += c;
    } else if (word.size() == 1) {
      total += c * berezin_symbol(dom, nu, word[0], z);
    } else {
      // [U A U]_{00} for a product, through two padded truncations.
      auto entry = [&](int degree) {
        const BasisPtr b = padded(basis, degree);
        Eigen::MatrixXcd prod = Eigen::MatrixXcd::Identity(b->size(), b->size());
        for (const auto& f : word) prod = prod * shifted_toeplitz(b, f, z).m;
        return prod(0, 0);
      };
      const int deg = std::max(basis->max_degree(), 20);
      const cplx v1 = entry(deg), v2 = entry(deg + 10);
      if (std::abs(v1 - v2) > 1e-8)
        throw Error(ErrorCode::Accuracy, "Berezin transform of a product did not settle under truncation");
      total += c * v2;
    }
  }
  return total;
}

double spectral_norm(const Eigen::MatrixXcd& m) {
  if (m.size() == 0) return 0.0;
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
  return svd.singularValues()(0);
}

double min_singular_value(const Eigen::MatrixXcd& m) {
  if (m.size() == 0) return 0.0;
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
  return svd.singularValues()(svd.singularValues().size() - 1);
}

}  // namespace bl
