#pragma once

// Classical bounded symmetric domains in their Harish-Chandra realization:
// the unit disk, the unit ball of C^n and the ball of 2x2 complex matrices.
//
// Everything here is pure; a Domain is a small immutable value.

#include <string>
#include <vector>

#include "bergman_limits/types.hpp"

namespace bl {

enum class DomainKind { UnitDisk, UnitBall, MatrixBall };

/// Polar singular values t_1 >= ... >= t_r >= 0.
struct PolarData {
  std::array<double, 2> t{};
  int r = 0;
  double max() const { return r > 0 ? t[0] : 0.0; }
};

/// Selects how h(z,w)^lambda picks its logarithm. Only the verify suite's
/// fault-injection hook uses anything but Continuous.
enum class BranchPolicy { Continuous, CorruptedForTesting };

/// Points with max t_j >= 1 - kBoundaryTolerance are treated as boundary.
inline constexpr double kBoundaryTolerance = 1e-13;

class Domain {
 public:
  static Domain unit_disk();
  static Domain unit_ball(int n);
  static Domain matrix_ball();

  DomainKind kind() const { return kind_; }
  int n() const { return n_; }
  int rank() const { return r_; }
  int a() const { return a_; }
  int b() const { return b_; }
  int genus() const { return g_; }
  std::string name() const;

  bool operator==(const Domain& o) const { return kind_ == o.kind_ && n_ == o.n_; }

  PolarData polar(const Point& z) const;
  bool interior(const Point& z) const;
  bool in_closure(const Point& z, double slack = 1e-12) const;

  /// Jordan triple determinant h(z,w); holomorphic in z, antiholomorphic in w.
  cplx h(const Point& z, const Point& w) const;
  /// h(z,w)^lambda on the branch continuous along s -> h(z, s w), s in [0,1],
  /// with h(z,0)^lambda = 1. Positive on the diagonal.
  cplx h_pow(const Point& z, const Point& w, double lambda,
             BranchPolicy policy = BranchPolicy::Continuous) const;
  /// Log of h on the same branch (sum of principal logs of the factors 1 - mu_i).
  cplx log_h(const Point& z, const Point& w,
             BranchPolicy policy = BranchPolicy::Continuous) const;

  /// Geodesic symmetry phi_z(w): involution exchanging 0 and z.
  Point phi(const Point& z, const Point& w) const;

  /// Bergman distance beta(z,w) for the hermitian metric
  /// g_ij = -g d_i dbar_j log h(z,z).
  double distance(const Point& z, const Point& w) const;
  /// beta(0, z) from polar data alone.
  double distance_from_origin(const Point& z) const;

  /// Bergman metric tensor at z, by central differences of log h(z,z);
  /// returned row-major n x n.
  std::vector<cplx> metric_tensor(const Point& z, double step = 1e-4) const;
  /// Length of the polygonal path through `pts` in the Bergman metric,
  /// each segment integrated with `per_segment` Gauss-Legendre nodes.
  double path_length(const std::vector<Point>& pts, int per_segment = 8) const;

  Point origin() const { return Point(n_); }
  void check_dim(const Point& z) const;

 private:
  Domain(DomainKind kind, int n, int r, int a, int b);

  DomainKind kind_;
  int n_, r_, a_, b_, g_;
};

/// (alpha, nu, p) admissible: p(alpha+1) > nu+1+(r-1)a/2 > p(r-1)a/2.
bool check_admissible(const Domain& dom, double alpha, double nu, double p);

}  // namespace bl
