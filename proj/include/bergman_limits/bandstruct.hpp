#pragma once

// Bergman-metric covers and partitions of unity, band profiles of integral operators,
// commutators with partition functions and the localization quantities |||A|_F|||_t,
// nu_t(A|_F), nu(A|_F).
//
// Everything lives on a finite node set inside the truncated domain {t_1 <= extent}:
// cells are sets of nodes, distances to cells are minima over their nodes, and operators
// act on node values through a Nystrom discretization W^{1/2} K W^{1/2}.

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bergman_limits/bergman_core.hpp"

namespace bl {

struct Cell {
  Point center;
  std::vector<int> nodes;  // indices into MetricCover::nodes
  double radius = 0.0;     // max beta(center, node)
};

struct MetricCover {
  Domain dom = Domain::unit_disk();
  double t = 0.5;
  double extent = 0.9;
  std::vector<Point> nodes;
  std::vector<Cell> cells;
  std::vector<int> owner;  // owner[i]: cell of node i
  int overlap = 0;         // measured N
  double diameter = 0.0;   // measured C(t)

  double spacing() const { return 1.0 / (3.0 * t); }
  /// beta-distance from x to the node set of cell j.
  double cell_distance(const Point& x, int j) const;
  /// Nearest cell center (Voronoi owner of x).
  int locate(const Point& x) const;
  /// Cells within distance r of x.
  std::vector<int> cells_within(const Point& x, double r) const;
};

/// Node density: nodes per cover spacing in the beta metric (disk grids only).
inline constexpr int kCoverDensity = 4;

/// Greedy beta-net with spacing 1/(3t) over the cover nodes, Voronoi cells, measured N and
/// C(t). Throws InvalidArgument unless 0 < t < 1 and 0 < extent < 1.
MetricCover build_cover(const Domain& dom, double t, double extent, int density = kCoverDensity);

struct PartitionValue {
  int cell;
  double phi;
  double psi;
};

/// phi_j = rho_j / sum rho, rho_j = max(0, 1 - 3t dist(., B_j)); psi_j = clamp(3 - 3t dist, 0, 1).
class PartitionOfUnity {
 public:
  explicit PartitionOfUnity(std::shared_ptr<const MetricCover> cover) : cover_(std::move(cover)) {}

  const MetricCover& cover() const { return *cover_; }
  /// Nonzero (phi, psi) values at x; x must lie in the truncated domain.
  std::vector<PartitionValue> values(const Point& x) const;
  double phi(int j, const Point& x) const;
  double psi(int j, const Point& x) const;
  /// Upper bound C(t) + 2/(3t) on sup_j diam supp phi_j.
  double support_diameter() const { return cover_->diameter + 2.0 / (3.0 * cover_->t); }

 private:
  std::shared_ptr<const MetricCover> cover_;
};

struct PropertyCheck {
  std::string name;
  bool passed = false;
  double worst = 0.0;  // largest violation or quotient
  double bound = 0.0;
  std::string detail;
};

struct PartitionCertificate {
  std::vector<PropertyCheck> checks;  // cover: disjoint, union, overlap, diameter; partition: (a)..(f)
  bool passed() const;
};

/// Certifies the cover invariants and properties (a)-(f) on `samples` seeded random points
/// and nearby pairs.
PartitionCertificate certify_partition(const PartitionOfUnity& pu, int samples, uint64_t seed);

/// Builds and certifies; throws Accuracy naming the failing property.
PartitionOfUnity build_partition(std::shared_ptr<const MetricCover> cover, int samples = 2000, uint64_t seed = 1);

enum class KernelKind { Identity, Multiplication, Projection, Toeplitz, RankOne, MatrixBacked };

/// Integral operator on L^2(dv_nu) given by a kernel (or a multiplier for diagonal kinds).
struct KernelOperator {
  KernelKind kind = KernelKind::Identity;
  Domain dom = Domain::unit_disk();
  double nu = 0.0;
  Symbol f;                              // Multiplication, Toeplitz
  Point a;                               // RankOne: k_a (x) k_a
  std::optional<OperatorMatrix> matrix;  // MatrixBacked
  cplx scale = 1.0;

  static KernelOperator identity(const Domain& dom, double nu, cplx c = 1.0);
  static KernelOperator multiplication(const Domain& dom, double nu, Symbol f);
  static KernelOperator projection(const Domain& dom, double nu);
  static KernelOperator toeplitz(const Domain& dom, double nu, Symbol f);
  static KernelOperator rank_one(const Domain& dom, double nu, const Point& a);
  static KernelOperator matrix_backed(const OperatorMatrix& m);

  bool diagonal() const { return kind == KernelKind::Identity || kind == KernelKind::Multiplication; }
  std::string label() const;
};

/// Nodes of a dv_nu rule restricted to {t_1 <= extent}, with their weights.
struct NodeSet {
  std::vector<Point> nodes;
  std::vector<double> weights;
};
/// `fine` selects the default rule orders; otherwise a coarse rule sized for dense Nystrom matrices.
NodeSet truncated_nodes(const Domain& dom, double nu, double extent, bool fine);

/// Block (W^{1/2} K W^{1/2})[rows, cols] of the Nystrom matrix.
Eigen::MatrixXcd nystrom_block(const KernelOperator& a, const NodeSet& ns, const std::vector<int>& rows,
                               const std::vector<int>& cols);
/// The full Nystrom matrix; the operator acts on u = W^{1/2} f.
Eigen::MatrixXcd nystrom_matrix(const KernelOperator& a, const NodeSet& ns);

struct BandPoint {
  double omega;
  double norm;   // sup of block norms over the sampled cell pairs
  int pairs;     // number of pairs with distance >= omega (0: empty, norm reported as 0)
};

struct BandOptions {
  double t = 0.9;
  double extent = 0.95;
  int max_cells = 120;
};

/// sup over sampled cell pairs (E,F), dist_beta(E,F) >= omega, of |M_E A M_F|.
std::vector<BandPoint> band_profile(const KernelOperator& a, const std::vector<double>& omegas,
                                    const BandOptions& opt = {});

/// sup over a sample of cells j of |[A, M_{phi_j^{1/p}}]|, by power iteration on the
/// Nystrom matrix.
double commutator_decay(const KernelOperator& a, const PartitionOfUnity& pu, double p = 2.0, int max_cells = 12);

struct LocalizationNorms {
  double norm_f = 0.0;       // estimate of |A|_F|
  double triple_norm = 0.0;  // |||A|_F|||_t
  double lower_norm = 0.0;   // nu(A|_F)
  double lower_norm_t = 0.0; // nu_t(A|_F)
  int probes = 0;
  int ball_probes = 0;
};

using Region = std::function<bool(const Point&)>;

/// Probe estimates over 64 unit-norm probes (32 supported in balls D(w, r_t) intersected
/// with F, 32 in F). Throws InvalidArgument when F holds no node.
LocalizationNorms localization_norms(const KernelOperator& a, const Region& f, const PartitionOfUnity& pu,
                                     uint64_t seed = 1);

}  // namespace bl
