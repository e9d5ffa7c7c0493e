#include "bergman_limits/quadrature.hpp"

#include <cmath>

#include "bergman_limits/gauss.hpp"

namespace bl {
namespace {

// Neumaier-compensated accumulator; summation order is the caller's loop order.
struct Accum {
  double sum = 0.0, comp = 0.0;
  void add(double x) {
    const double t = sum + x;
    if (std::abs(sum) >= std::abs(x))
      comp += (sum - t) + x;
    else
      comp += (x - t) + sum;
    sum = t;
  }
  double value() const { return sum + comp; }
};

std::vector<double> normalized(const std::vector<double>& w) {
  Accum a;
  for (double x : w) a.add(x);
  std::vector<double> out(w);
  for (double& x : out) x /= a.value();
  return out;
}

struct Factor {
  std::vector<double> x, w;
};

Factor equispaced(int m) {
  Factor f;
  for (int k = 0; k < m; ++k) {
    f.x.push_back(2.0 * M_PI * k / m);
    f.w.push_back(1.0 / m);
  }
  return f;
}

// Uniform probability on the simplex {x_1 + ... + x_n = 1} via Duffy coordinates;
// each returned node is the full vector (x_1..x_n).
void simplex_rule(int n, int order, std::vector<std::array<double, kMaxDim>>& xs,
                  std::vector<double>& ws) {
  xs.assign(1, std::array<double, kMaxDim>{});
  ws.assign(1, 1.0);
  std::vector<double> rest(1, 1.0);
  for (int k = 1; k <= n - 1; ++k) {
    const Rule1D& r = gauss_jacobi(order, 0.0, 1.0, static_cast<double>(n - 1 - k), 0.0);
    const auto rw = normalized(r.w);
    std::vector<std::array<double, kMaxDim>> nx;
    std::vector<double> nw, nrest;
    for (size_t i = 0; i < xs.size(); ++i) {
      for (int j = 0; j < r.size(); ++j) {
        auto x = xs[i];
        x[k - 1] = rest[i] * r.x[j];
        nx.push_back(x);
        nw.push_back(ws[i] * rw[j]);
        nrest.push_back(rest[i] * (1.0 - r.x[j]));
      }
    }
    xs.swap(nx);
    ws.swap(nw);
    rest.swap(nrest);
  }
  for (size_t i = 0; i < xs.size(); ++i) xs[i][n - 1] = rest[i];
}

// Torus product of `n` equispaced phase sets.
void torus_rule(int n, int m, std::vector<std::array<double, kMaxDim>>& th, std::vector<double>& ws) {
  const Factor f = equispaced(m);
  th.assign(1, std::array<double, kMaxDim>{});
  ws.assign(1, 1.0);
  for (int k = 0; k < n; ++k) {
    std::vector<std::array<double, kMaxDim>> nt;
    std::vector<double> nw;
    for (size_t i = 0; i < th.size(); ++i)
      for (int j = 0; j < m; ++j) {
        auto t = th[i];
        t[k] = f.x[j];
        nt.push_back(t);
        nw.push_back(ws[i] * f.w[j]);
      }
    th.swap(nt);
    ws.swap(nw);
  }
}

// Probability rule for c h^nu dv on B^n (n >= 2).
void ball_nodes(int n, double nu, int radial, int simplex, int phases, std::vector<Point>& nodes,
                std::vector<double>& weights) {
  const Rule1D& rs = gauss_jacobi(radial, 0.0, 1.0, nu, static_cast<double>(n - 1));
  const auto rw = normalized(rs.w);
  std::vector<std::array<double, kMaxDim>> sx, th;
  std::vector<double> sw, tw;
  simplex_rule(n, simplex, sx, sw);
  torus_rule(n, phases, th, tw);
  nodes.clear();
  weights.clear();
  nodes.reserve(rs.x.size() * sx.size() * th.size());
  for (int i = 0; i < rs.size(); ++i)
    for (size_t a = 0; a < sx.size(); ++a)
      for (size_t b = 0; b < th.size(); ++b) {
        Point z(n);
        for (int k = 0; k < n; ++k) z[k] = std::polar(std::sqrt(rs.x[i] * sx[a][k]), th[b][k]);
        nodes.push_back(z);
        weights.push_back(rw[i] * sw[a] * tw[b]);
      }
}

QuadratureRule from_polar(double nu, PolarGrid grid, const std::string& scheme) {
  QuadratureRule rule;
  rule.dom = Domain::unit_disk();
  rule.nu = nu;
  rule.scheme = scheme;
  rule.radial_order = static_cast<int>(grid.radius.size());
  rule.angular_order = static_cast<int>(grid.angle.size());
  rule.nodes.reserve(grid.radius.size() * grid.angle.size());
  for (size_t i = 0; i < grid.radius.size(); ++i)
    for (size_t k = 0; k < grid.angle.size(); ++k) {
      Point z(1);
      z[0] = std::polar(grid.radius[i], grid.angle[k]);
      rule.nodes.push_back(z);
      rule.weights.push_back(grid.rweight[i] * grid.aweight[k]);
    }
  rule.polar = std::move(grid);
  return rule;
}

}  // namespace

WeightContext WeightContext::make(const Domain& dom, double nu, double p) {
  return make(dom, nu, p, nu);
}

WeightContext WeightContext::make(const Domain& dom, double nu, double p, double alpha) {
  if (!(nu > -1.0) || !std::isfinite(nu))
    throw Error(ErrorCode::NotAdmissible, "nu must be > -1 for v_nu to be finite");
  if (!(p > 1.0) || !std::isfinite(p)) throw Error(ErrorCode::NotAdmissible, "p must lie in (1, inf)");
  WeightContext ctx;
  ctx.nu = nu;
  ctx.p = p;
  ctx.alpha = alpha;
  ctx.c_nu = normalization_constant(dom, nu);
  ctx.admissible = check_admissible(dom, alpha, nu, p);
  return ctx;
}

double commuting_alpha(const Domain& dom, double nu, double p) {
  return (2.0 / p - 1.0) * dom.genus() + 2.0 * nu / p;
}

double normalization_constant(const Domain& dom, double nu) {
  if (!(nu > -1.0)) throw Error(ErrorCode::NotAdmissible, "nu must be > -1");
  switch (dom.kind()) {
    case DomainKind::UnitDisk:
    case DomainKind::UnitBall: {
      const int n = dom.n();
      // int_{B^n} (1-|z|^2)^nu dv = pi^n Gamma(nu+1) / Gamma(n+nu+1)
      return std::exp(std::lgamma(n + nu + 1.0) - std::lgamma(nu + 1.0) - n * std::log(M_PI));
    }
    case DomainKind::MatrixBall: {
      // Fibred over the first row: (ball mass with nu+1) * (ball mass with nu), both in B^2.
      const double m1 = M_PI * M_PI / ((nu + 2.0) * (nu + 3.0));
      const double m2 = M_PI * M_PI / ((nu + 1.0) * (nu + 2.0));
      return 1.0 / (m1 * m2);
    }
  }
  throw Error(ErrorCode::Internal, "unknown domain kind");
}

double QuadratureRule::lebesgue_weight(size_t i) const {
  const Point& x = nodes[i];
  const double hx = dom.h(x, x).real();
  return weights[i] / (normalization_constant(dom, nu) * std::pow(hx, nu));
}

RuleOrders default_orders(const Domain& dom) {
  switch (dom.kind()) {
    case DomainKind::UnitDisk:
      return {60, 128};
    case DomainKind::UnitBall:
      return dom.n() == 2 ? RuleOrders{40, 32} : RuleOrders{20, 8};
    case DomainKind::MatrixBall:
      return {5, 6};
  }
  return {};
}

QuadratureRule build_rule(const Domain& dom, double nu) {
  const RuleOrders o = default_orders(dom);
  return build_rule(dom, nu, o.radial, o.angular);
}

QuadratureRule build_rule(const Domain& dom, double nu, int radial_order, int angular_order) {
  if (radial_order < 1 || angular_order < 1)
    throw Error(ErrorCode::InvalidArgument, "quadrature orders must be >= 1");
  if (!(nu > -1.0)) throw Error(ErrorCode::NotAdmissible, "nu must be > -1");

  if (dom.kind() == DomainKind::UnitDisk) {
    const Rule1D& rs = gauss_jacobi(radial_order, 0.0, 1.0, nu, 0.0);
    PolarGrid grid;
    for (int i = 0; i < rs.size(); ++i) {
      grid.radius.push_back(std::sqrt(rs.x[i]));
      grid.rweight.push_back((nu + 1.0) * rs.w[i]);
    }
    const Factor a = equispaced(angular_order);
    grid.angle = a.x;
    grid.aweight = a.w;
    QuadratureRule rule = from_polar(nu, std::move(grid), "disk-jacobi-trapezoid");
    return rule;
  }

  QuadratureRule rule;
  rule.dom = dom;
  rule.nu = nu;
  rule.radial_order = radial_order;
  rule.angular_order = angular_order;

  if (dom.kind() == DomainKind::UnitBall) {
    const int simplex = dom.n() == 2 ? 8 : 6;
    rule.scheme = "ball-jacobi-duffy-torus";
    ball_nodes(dom.n(), nu, radial_order, simplex, angular_order, rule.nodes, rule.weights);
    return rule;
  }

  // Matrix ball: Z has first row z1 and second row u L, L = I - z1^* z1 / (1 + c),
  // c = sqrt(1 - |z1|^2). Then h(Z,Z) = (1-|z1|^2)(1-|u|^2) and
  // dv(Z) = (1-|z1|^2) dv(z1) dv(u). The radial variable of z1 is c, whose weight is
  // c^(2nu+3)(1-c)(1+c).
  rule.scheme = "matrix-row-fibration";
  const Rule1D& rc = gauss_jacobi(radial_order, 0.0, 1.0, 1.0, 2.0 * nu + 3.0);
  std::vector<double> cw(rc.w);
  for (int i = 0; i < rc.size(); ++i) cw[i] *= 1.0 + rc.x[i];
  cw = normalized(cw);
  std::vector<std::array<double, kMaxDim>> sx, th;
  std::vector<double> sw, tw;
  simplex_rule(2, radial_order, sx, sw);
  torus_rule(2, angular_order, th, tw);
  std::vector<Point> un;
  std::vector<double> uw;
  ball_nodes(2, nu, radial_order, radial_order, angular_order, un, uw);

  for (int i = 0; i < rc.size(); ++i) {
    const double c = rc.x[i];
    const double s = 1.0 - c * c;
    for (size_t a = 0; a < sx.size(); ++a)
      for (size_t b = 0; b < th.size(); ++b) {
        const cplx r0 = std::polar(std::sqrt(s * sx[a][0]), th[b][0]);
        const cplx r1 = std::polar(std::sqrt(s * sx[a][1]), th[b][1]);
        const double w1 = cw[i] * sw[a] * tw[b];
        const double k = 1.0 / (1.0 + c);
        // L_ij = delta_ij - conj(z1_i) z1_j / (1 + c)
        const cplx l00 = 1.0 - std::norm(r0) * k, l01 = -std::conj(r0) * r1 * k;
        const cplx l10 = -std::conj(r1) * r0 * k, l11 = 1.0 - std::norm(r1) * k;
        for (size_t j = 0; j < un.size(); ++j) {
          const cplx u0 = un[j][0], u1 = un[j][1];
          rule.nodes.push_back(Point{r0, r1, u0 * l00 + u1 * l10, u0 * l01 + u1 * l11});
          rule.weights.push_back(w1 * uw[j]);
        }
      }
  }
  return rule;
}

QuadratureRule disk_graded_rule(double nu, const Point& toward, double delta, int angular_panels,
                                int per_panel) {
  if (!(nu > -1.0)) throw Error(ErrorCode::NotAdmissible, "nu must be > -1");
  if (angular_panels < 1 || per_panel < 1)
    throw Error(ErrorCode::InvalidArgument, "graded rule needs positive panel counts");
  const double fine = std::max(delta, 1e-12) / 4.0;
  const Rule1D& gl = gauss_legendre(per_panel, 0.0, 1.0);

  PolarGrid grid;
  // Radial panels in s = |w|^2: [0,1/2], [1/2,3/4], ... then a Jacobi end panel.
  double lo = 0.0, width = 0.5;
  while (width > fine && lo + width < 1.0) {
    for (int j = 0; j < gl.size(); ++j) {
      const double s = lo + width * gl.x[j];
      grid.radius.push_back(std::sqrt(s));
      grid.rweight.push_back((nu + 1.0) * width * gl.w[j] * std::pow(1.0 - s, nu));
    }
    lo += width;
    width *= 0.5;
  }
  const Rule1D& end = gauss_jacobi(per_panel, lo, 1.0, nu, 0.0);
  for (int j = 0; j < end.size(); ++j) {
    grid.radius.push_back(std::sqrt(end.x[j]));
    grid.rweight.push_back((nu + 1.0) * end.w[j]);
  }

  // Angular panels: geometric around theta0 out to the coarse width, uniform elsewhere.
  const double theta0 = toward.n > 0 && std::abs(toward[0]) > 0.0 ? std::arg(toward[0]) : 0.0;
  const double coarse = 2.0 * M_PI / angular_panels;
  std::vector<double> offsets{0.0};
  if (delta < 1.0) {
    double d = std::min(fine, coarse);
    while (d < coarse) {
      offsets.push_back(d);
      d *= 2.0;
    }
  }
  const double reach = offsets.back();
  std::vector<std::pair<double, double>> panels;
  for (size_t k = 0; k + 1 < offsets.size(); ++k) {
    panels.emplace_back(theta0 + offsets[k], theta0 + offsets[k + 1]);
    panels.emplace_back(theta0 - offsets[k + 1], theta0 - offsets[k]);
  }
  const double span = 2.0 * M_PI - 2.0 * reach;
  const int count = std::max(1, static_cast<int>(std::ceil(span / coarse - 1e-9)));
  for (int k = 0; k < count; ++k)
    panels.emplace_back(theta0 + reach + span * k / count, theta0 + reach + span * (k + 1) / count);
  for (const auto& [a, b] : panels)
    for (int j = 0; j < gl.size(); ++j) {
      grid.angle.push_back(a + (b - a) * gl.x[j]);
      grid.aweight.push_back((b - a) * gl.w[j] / (2.0 * M_PI));
    }

  QuadratureRule rule = from_polar(nu, std::move(grid), "disk-graded");
  rule.radial_order = per_panel;
  rule.angular_order = angular_panels;
  return rule;
}

cplx integrate(const QuadratureRule& rule, const Integrand& f) {
  Accum re, im;
  for (size_t i = 0; i < rule.nodes.size(); ++i) {
    const cplx v = f(rule.nodes[i]);
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw Error(ErrorCode::Accuracy, "integrand is not finite at a quadrature node");
    re.add(rule.weights[i] * v.real());
    im.add(rule.weights[i] * v.imag());
  }
  return {re.value(), im.value()};
}

double integrate_real(const QuadratureRule& rule, const std::function<double(const Point&)>& f) {
  Accum acc;
  for (size_t i = 0; i < rule.nodes.size(); ++i) {
    const double v = f(rule.nodes[i]);
    if (!std::isfinite(v)) throw Error(ErrorCode::Accuracy, "integrand is not finite at a quadrature node");
    acc.add(rule.weights[i] * v);
  }
  return acc.value();
}

QuadratureRule focused_rule(const Domain& dom, double nu, const Point& z, int degree) {
  if (dom.kind() == DomainKind::UnitDisk && std::abs(z[0]) > 0.5) {
    const int panels = std::max(32, degree + 2);
    const int q = std::clamp(degree / 2 + 2, 12, 24);
    return disk_graded_rule(nu, z, 1.0 - std::abs(z[0]), panels, q);
  }
  if (dom.kind() == DomainKind::UnitDisk) {
    const RuleOrders o = default_orders(dom);
    // Matrix entries see the symbol composed with phi_z, whose gradient grows by up to
    // (1+|z|)/(1-|z|); scalar integrals (degree 0) are already resolved by the defaults.
    const double s = degree > 0 ? 1.0 + std::abs(z[0]) / (1.0 - std::abs(z[0])) : 1.0;
    return build_rule(dom, nu, static_cast<int>(std::ceil(s * std::max(o.radial, degree + 2))),
                      static_cast<int>(std::ceil(s * std::max(o.angular, 2 * degree + 4))));
  }
  return build_rule(dom, nu);
}

}  // namespace bl
