#include "bergman_limits/bergman_core.hpp"

#include <cmath>
#include <sstream>

#include "bergman_limits/pairing.hpp"
#include "bergman_limits/parallel.hpp"

namespace bl {
namespace {

constexpr size_t kChunk = 2048;

// Monomial values z^k for all multi-indices.
void monomials(const std::vector<MultiIndex>& idx, int max_degree, const Point& x, cplx* out) {
  std::array<std::vector<cplx>, kMaxDim> pw;
  for (int i = 0; i < x.n; ++i) {
    pw[i].resize(static_cast<size_t>(max_degree) + 1);
    pw[i][0] = 1.0;
    for (int k = 1; k <= max_degree; ++k) pw[i][k] = pw[i][k - 1] * x[i];
  }
  for (size_t j = 0; j < idx.size(); ++j) {
    cplx v = 1.0;
    for (int i = 0; i < x.n; ++i) v *= pw[i][idx[j].e[i]];
    out[j] = v;
  }
}

QuadratureRule basis_rule(const Domain& dom, double nu, int d) {
  const RuleOrders o = default_orders(dom);
  switch (dom.kind()) {
    case DomainKind::UnitDisk:
      return build_rule(dom, nu, std::max(o.radial, d + 2), std::max(o.angular, 2 * d + 4));
    case DomainKind::UnitBall:
      return build_rule(dom, nu, std::max(o.radial, d + 2), std::max(o.angular, 2 * d + 2));
    case DomainKind::MatrixBall:
      return build_rule(dom, nu, std::max(o.radial, d + 3), std::max(o.angular, 2 * d + 2));
  }
  throw Error(ErrorCode::Internal, "unknown domain kind");
}

}  // namespace

Pairing pair_with_basis(const Basis& rows, const QuadratureRule& rule, int ncols, const NodeValues& values) {
  const int nb = rows.size();
  const size_t n = rule.size();
  const size_t chunks = chunk_count(n, kChunk);
  std::vector<Eigen::MatrixXcd> part(chunks);
  std::vector<Eigen::VectorXd> norm2(chunks);
  parallel_chunks(chunks, [&](size_t c) {
    const size_t lo = c * kChunk, hi = std::min(n, lo + kChunk);
    const auto len = static_cast<Eigen::Index>(hi - lo);
    Eigen::MatrixXcd e(len, nb), v(len, ncols);
    Eigen::VectorXd w(len);
    std::vector<cplx> buf(static_cast<size_t>(ncols));
    for (size_t j = lo; j < hi; ++j) {
      const auto r = static_cast<Eigen::Index>(j - lo);
      e.row(r) = rows.eval(rule.nodes[j]).transpose();
      values(rule.nodes[j], buf.data());
      for (int k = 0; k < ncols; ++k) {
        if (!std::isfinite(buf[k].real()) || !std::isfinite(buf[k].imag()))
          throw Error(ErrorCode::Accuracy, "non-finite value at a quadrature node");
        v(r, k) = buf[k];
      }
      w(r) = rule.weights[j];
    }
    const Eigen::MatrixXcd wv = w.asDiagonal() * v;
    part[c] = e.adjoint() * wv;
    norm2[c] = (v.cwiseAbs2().transpose() * w);
  });
  Pairing out;
  out.m = Eigen::MatrixXcd::Zero(nb, ncols);
  out.col_norm2 = Eigen::VectorXd::Zero(ncols);
  for (size_t c = 0; c < chunks; ++c) {
    out.m += part[c];
    out.col_norm2 += norm2[c];
  }
  return out;
}

std::vector<MultiIndex> graded_lex(int n, int max_degree) {
  std::vector<MultiIndex> out;
  for (int d = 0; d <= max_degree; ++d) {
    // exponents in lexicographically decreasing order: (d,0,..), (d-1,1,..), ...
    std::array<int, kMaxDim> e{};
    std::function<void(int, int)> rec = [&](int pos, int left) {
      if (pos == n - 1) {
        e[pos] = left;
        MultiIndex m;
        m.e = e;
        m.degree = d;
        out.push_back(m);
        return;
      }
      for (int k = left; k >= 0; --k) {
        e[pos] = k;
        rec(pos + 1, left - k);
      }
    };
    rec(0, d);
  }
  return out;
}

Basis::Basis(const Domain& dom, const WeightContext& ctx, int max_degree)
    : dom_(dom), ctx_(ctx), max_degree_(max_degree) {}

std::shared_ptr<const Basis> Basis::build(const Domain& dom, const WeightContext& ctx, int max_degree) {
  if (max_degree < 0) throw Error(ErrorCode::InvalidArgument, "max_degree must be >= 0");
  if (!check_admissible(dom, ctx.nu, ctx.nu, ctx.p))
    throw Error(ErrorCode::NotAdmissible, "weight (nu, nu, p) is not admissible for " + dom.name());
  std::shared_ptr<Basis> b(new Basis(dom, ctx, max_degree));
  b->idx_ = graded_lex(dom.n(), max_degree);
  b->rule_ = basis_rule(dom, ctx.nu, max_degree);
  const int nb = b->size();
  b->coef_ = Eigen::MatrixXcd::Identity(nb, nb);
  b->norms_.assign(static_cast<size_t>(nb), 1.0);

  // Gram matrix of raw monomials (coef_ = I makes eval() return monomials).
  const auto& idx = b->idx_;
  const Pairing g = pair_with_basis(*b, b->rule_, nb, [&](const Point& x, cplx* out) {
    monomials(idx, max_degree, x, out);
  });
  Eigen::MatrixXcd gram = g.m;
  for (int i = 0; i < nb; ++i) b->norms_[i] = std::sqrt(gram(i, i).real());

  double err = 0.0;
  for (int i = 0; i < nb; ++i)
    for (int j = 0; j < nb; ++j)
      if (idx[i].degree != idx[j].degree || (i != j && b->monomials_orthogonal()))
        err = std::max(err, std::abs(gram(i, j)) / (b->norms_[i] * b->norms_[j]));

  b->coef_ = Eigen::MatrixXcd::Zero(nb, nb);
  if (b->monomials_orthogonal()) {
    for (int i = 0; i < nb; ++i) b->coef_(i, i) = 1.0 / b->norms_[i];
  } else {
    int start = 0;
    while (start < nb) {
      int end = start;
      while (end < nb && idx[end].degree == idx[start].degree) ++end;
      const int len = end - start;
      const Eigen::MatrixXcd block = gram.block(start, start, len, len);
      Eigen::LLT<Eigen::MatrixXcd> llt(block);
      if (llt.info() != Eigen::Success) throw Error(ErrorCode::Accuracy, "monomial Gram matrix is not positive definite");
      const Eigen::MatrixXcd linv = llt.matrixL().solve(Eigen::MatrixXcd::Identity(len, len));
      b->coef_.block(start, start, len, len) = linv.adjoint();
      const Eigen::MatrixXcd check = linv * block * linv.adjoint() - Eigen::MatrixXcd::Identity(len, len);
      err = std::max(err, check.cwiseAbs().maxCoeff());
      start = end;
    }
  }
  b->gram_error_ = err;
  return b;
}

int Basis::count_upto(int d) const {
  int c = 0;
  for (const auto& m : idx_)
    if (m.degree <= d) ++c;
  return c;
}

Eigen::VectorXcd Basis::eval(const Point& x) const {
  dom_.check_dim(x);
  Eigen::VectorXcd mono(size());
  monomials(idx_, max_degree_, x, mono.data());
  if (monomials_orthogonal()) return coef_.diagonal().cwiseProduct(mono);
  return coef_.transpose() * mono;
}

Eigen::MatrixXcd Basis::eval_rows(const std::vector<Point>& pts) const {
  Eigen::MatrixXcd out(static_cast<Eigen::Index>(pts.size()), size());
  for (size_t i = 0; i < pts.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = eval(pts[i]).transpose();
  return out;
}

Eigen::VectorXcd Basis::coords(const Integrand& f, const QuadratureRule* rule) const {
  const Pairing p = pair_with_basis(*this, rule ? *rule : rule_, 1, [&](const Point& x, cplx* out) { out[0] = f(x); });
  return p.m.col(0);
}

cplx Basis::combine(const Eigen::VectorXcd& c, const Point& x) const { return eval(x).cwiseProduct(c).sum(); }

std::shared_ptr<const Basis> Basis::with_degree(int d) const { return build(dom_, ctx_, d); }

std::string ToeplitzWords::describe() const {
  std::ostringstream os;
  for (size_t t = 0; t < words.size(); ++t) {
    if (t) os << " + ";
    os << "(" << coeff[t].real() << (coeff[t].imag() < 0 ? "" : "+") << coeff[t].imag() << "i)";
    if (words[t].empty()) os << "*I";
    for (const auto& f : words[t]) os << "*T[" << f.label() << "]";
  }
  return os.str();
}

OperatorMatrix identity_operator(const BasisPtr& basis, double p) {
  OperatorMatrix a;
  a.m = Eigen::MatrixXcd::Identity(basis->size(), basis->size());
  a.basis = basis;
  a.p = p;
  a.label = "I";
  a.words = ToeplitzWords{{1.0}, {{}}};
  return a;
}

cplx KernelFunction::operator()(const Point& w) const {
  const double e = nu + dom.genus();
  const double q = p / (p - 1.0);
  return std::pow(dom.h(z, z).real(), e / q) * dom.h_pow(w, z, -e);
}

KernelFunction reproducing_kernel(const Domain& dom, const WeightContext& ctx, const Point& z, double pexp) {
  if (!dom.interior(z)) throw Error(ErrorCode::OutsideDomain, "kernel base point must be interior");
  return KernelFunction{dom, z, ctx.nu, pexp};
}

Integrand projection_apply(const QuadratureRule& rule, const Integrand& f) {
  std::vector<cplx> fw(rule.size());
  for (size_t j = 0; j < rule.size(); ++j) fw[j] = rule.weights[j] * f(rule.nodes[j]);
  const Domain dom = rule.dom;
  const double e = rule.nu + dom.genus();
  const std::vector<Point> nodes = rule.nodes;
  return [fw = std::move(fw), nodes, dom, e](const Point& z) {
    if (!dom.interior(z)) throw Error(ErrorCode::OutsideDomain, "projection evaluated outside the open domain");
    cplx s = 0.0;
    for (size_t j = 0; j < nodes.size(); ++j) s += fw[j] * dom.h_pow(z, nodes[j], -e);
    return s;
  };
}

Integrand shift_function(const Domain& dom, double nu, const Point& z, double pexp, Integrand f) {
  if (!dom.interior(z)) throw Error(ErrorCode::OutsideDomain, "shift base point must be interior");
  const double e = nu + dom.genus();
  const double scale = std::pow(dom.h(z, z).real(), e / pexp);
  return [=](const Point& w) { return f(dom.phi(z, w)) * scale * dom.h_pow(w, z, -2.0 * e / pexp); };
}

double p_norm(const QuadratureRule& rule, const Integrand& f, double p) {
  return std::pow(integrate_real(rule, [&](const Point& x) { return std::pow(std::abs(f(x)), p); }), 1.0 / p);
}

ShiftBlock shift_isometry_block(const Basis& rows, const Basis& cols, const Point& z, double pexp) {
  const Domain& dom = rows.domain();
  if (!(dom == cols.domain())) throw Error(ErrorCode::DimensionMismatch, "bases live on different domains");
  if (!dom.interior(z)) throw Error(ErrorCode::OutsideDomain, "shift base point must be interior");
  const double e = rows.ctx().nu + dom.genus();
  const double scale = std::pow(dom.h(z, z).real(), e / pexp);
  // U e_k carries h(w,z)^{-2e/p}, which peaks in a (1 - |z|)-neighbourhood of z; the
  // default rule stops resolving that peak near the boundary.
  const int degree = std::max(rows.max_degree(), cols.max_degree());
  const bool graded = dom.kind() == DomainKind::UnitDisk && std::abs(z[0]) > 0.9;
  const QuadratureRule local = graded ? focused_rule(dom, rows.ctx().nu, z, degree) : QuadratureRule{};
  const QuadratureRule& rule = graded ? local : rows.max_degree() >= cols.max_degree() ? rows.rule() : cols.rule();
  const int nc = cols.size();
  const Pairing pr = pair_with_basis(rows, rule, nc, [&](const Point& w, cplx* out) {
    const cplx factor = scale * dom.h_pow(w, z, -2.0 * e / pexp);
    const Eigen::VectorXcd v = cols.eval(dom.phi(z, w));
    for (int k = 0; k < nc; ++k) out[k] = factor * v(k);
  });
  ShiftBlock sb;
  sb.m = pr.m;
  sb.column_spill.resize(static_cast<size_t>(nc));
  for (int k = 0; k < nc; ++k) {
    const double captured = pr.m.col(k).squaredNorm();
    sb.column_spill[k] = std::sqrt(std::max(0.0, pr.col_norm2(k) - captured));
    sb.spill = std::max(sb.spill, sb.column_spill[k]);
  }
  return sb;
}

OperatorMatrix shift_isometry_matrix(const BasisPtr& basis, const Point& z, double pexp) {
  const ShiftBlock sb = shift_isometry_block(*basis, *basis, z, pexp);
  OperatorMatrix out;
  out.m = sb.m;
  out.basis = basis;
  out.p = pexp;
  out.spill = sb.spill;
  out.label = "U_z";
  return out;
}

Symbol bz_symbol(const Domain& dom, const WeightContext& ctx, const Point& z) {
  if (!dom.interior(z)) throw Error(ErrorCode::OutsideDomain, "b_z needs an interior point");
  const double c = (1.0 / ctx.q() - 1.0 / ctx.p) * (ctx.nu + dom.genus());
  if (c == 0.0) return Symbol::constant(1.0);
  Symbol s = Symbol::callable("b_z", [dom, z, c](const Point& y) {
    return std::exp(c * (dom.log_h(z, y) - dom.log_h(y, z)));
  }, 1.0);
  s.buc = true;
  return s;
}

KernelExpansion kernel_expansion(const Basis& basis, const Point& z) {
  const Domain& dom = basis.domain();
  if (!dom.interior(z)) throw Error(ErrorCode::OutsideDomain, "kernel base point must be interior");
  const double scale = std::pow(dom.h(z, z).real(), 0.5 * (basis.ctx().nu + dom.genus()));
  KernelExpansion k;
  k.c = basis.eval(z).conjugate() * scale;
  k.tail = std::max(0.0, 1.0 - k.c.squaredNorm());
  return k;
}

cplx berezin_matrix(const OperatorMatrix& a, const Point& z) {
  const KernelExpansion k = kernel_expansion(*a.basis, z);
  if (!a.finite_rank && k.tail > kKernelTailTolerance)
    throw Error(ErrorCode::Accuracy, "kernel expansion tail " + std::to_string(k.tail) +
                                         " exceeds tolerance at this point; raise the degree or move inward");
  return k.c.dot(a.m * k.c);
}

}  // namespace bl
