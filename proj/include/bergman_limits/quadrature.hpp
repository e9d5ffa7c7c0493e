#pragma once

// Weighted measures dv_nu = c_nu h(z,z)^nu dv and product quadrature rules for them.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bergman_limits/symdomain.hpp"

namespace bl {

/// (nu, p, alpha) together with c_nu and the admissibility verdict.
struct WeightContext {
  double nu = 0.0;
  double p = 2.0;
  double alpha = 0.0;
  double c_nu = 0.0;
  bool admissible = false;

  double q() const { return p / (p - 1.0); }

  /// alpha defaults to nu. Throws NotAdmissible when nu <= -1 or p <= 1.
  static WeightContext make(const Domain& dom, double nu, double p);
  static WeightContext make(const Domain& dom, double nu, double p, double alpha);
};

/// The projection weight alpha = (2/p - 1) g + 2 nu / p that commutes with U_z^p.
double commuting_alpha(const Domain& dom, double nu, double p);

/// c_nu such that c_nu h(z,z)^nu dv is a probability measure (dv = Lebesgue on C^n).
double normalization_constant(const Domain& dom, double nu);

/// Tensor-product structure of rules on the disk: node (i, k) sits at
/// radius[i] * exp(i angle[k]) and has weight rweight[i] * aweight[k].
struct PolarGrid {
  std::vector<double> radius, rweight;
  std::vector<double> angle, aweight;
};

/// Nodes and dv_nu-weights (the weights sum to 1).
struct QuadratureRule {
  Domain dom = Domain::unit_disk();
  double nu = 0.0;
  std::vector<Point> nodes;
  std::vector<double> weights;
  double target_accuracy = 1e-10;
  int radial_order = 0;
  int angular_order = 0;
  std::string scheme;
  std::optional<PolarGrid> polar;

  size_t size() const { return nodes.size(); }
  /// Weight of node i against unnormalized Lebesgue measure.
  double lebesgue_weight(size_t i) const;
};

struct RuleOrders {
  int radial = 0;
  int angular = 0;
};

/// Default orders: disk (60, 128); B^2 (40, 32 phases); B^3/B^4 (20, 8); matrix ball (5, 6).
RuleOrders default_orders(const Domain& dom);

/// Product rule: Gauss-Jacobi in s = |z|^2 with the (1-s)^nu weight built in, Gauss-Jacobi
/// simplex coordinates and equispaced phases on the sphere; the matrix ball is fibred over
/// its first row.
QuadratureRule build_rule(const Domain& dom, double nu, int radial_order, int angular_order);
QuadratureRule build_rule(const Domain& dom, double nu);

/// Disk rule graded toward the boundary point `toward`/|toward|: radial panels halve
/// toward |w| = 1 down to width ~ delta/8, angular panels refine geometrically around
/// arg(toward). Integrands concentrated in a delta-neighbourhood of that point are
/// resolved. `angular_panels` sets the coarse angular resolution (2 pi / panels).
QuadratureRule disk_graded_rule(double nu, const Point& toward, double delta,
                                int angular_panels = 32, int per_panel = 12);

/// Rule for integrands concentrated near z against polynomials of degree <= `degree`:
/// disk_graded_rule toward z on the disk once |z| > 1/2, otherwise a default-order rule
/// enlarged by 1 + |z|/(1-|z|) when degree > 0.
QuadratureRule focused_rule(const Domain& dom, double nu, const Point& z, int degree);

using Integrand = std::function<cplx(const Point&)>;

/// Sum of weights * f(node) (compensated, fixed order). Throws Accuracy on a non-finite sample.
cplx integrate(const QuadratureRule& rule, const Integrand& f);
double integrate_real(const QuadratureRule& rule, const std::function<double(const Point&)>& f);

}  // namespace bl
