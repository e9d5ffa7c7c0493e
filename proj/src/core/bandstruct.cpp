#include "bergman_limits/bandstruct.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "bergman_limits/parallel.hpp"
#include "bergman_limits/toeplitz.hpp"

namespace bl {
namespace {

// beta-uniform polar grid on the disk: rings at beta-spacing h, ring points at spacing <= h.
std::vector<Point> disk_cover_nodes(const Domain& dom, double h, double extent) {
  const double sg = std::sqrt(static_cast<double>(dom.genus()));
  const double beta_max = sg * std::atanh(extent);
  std::vector<Point> pts{Point{cplx(0.0)}};
  const int rings = static_cast<int>(std::ceil(beta_max / h));
  for (int i = 1; i <= rings; ++i) {
    const double r = std::tanh(std::min(i * h, beta_max) / sg);
    const double circ = 2.0 * M_PI * r * sg / (1.0 - r * r);
    const int m = std::max(6, static_cast<int>(std::ceil(circ / h)));
    const double shift = (i % 2) * M_PI / m;
    for (int k = 0; k < m; ++k) pts.push_back(Point{std::polar(r, shift + 2.0 * M_PI * k / m)});
  }
  return pts;
}

std::vector<Point> rule_cover_nodes(const Domain& dom, double extent) {
  QuadratureRule rule = dom.kind() == DomainKind::MatrixBall ? build_rule(dom, 0.0, 3, 4)
                        : dom.n() == 2                         ? build_rule(dom, 0.0, 16, 12)
                                                               : build_rule(dom, 0.0, 8, 6);
  std::vector<Point> pts{dom.origin()};
  for (const auto& x : rule.nodes)
    if (dom.polar(x).max() <= extent) pts.push_back(x);
  return pts;
}

double min_distance(const Domain& dom, const Point& x, const std::vector<Point>& nodes, const std::vector<int>& idx) {
  double d = std::numeric_limits<double>::infinity();
  for (int i : idx) d = std::min(d, dom.distance(x, nodes[i]));
  return d;
}

void check_in_extent(const MetricCover& c, const Point& x) {
  if (c.dom.polar(x).max() > c.extent + 1e-12)
    throw Error(ErrorCode::OutsideDomain, "point lies outside the covered region");
}

Point random_in_extent(const Domain& dom, std::mt19937_64& rng, double extent) {
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Point z(dom.n());
  for (int i = 0; i < dom.n(); ++i) z[i] = {g(rng), g(rng)};
  const double t = dom.polar(z).max();
  return z.scaled(extent * std::pow(u(rng), 1.0 / (2.0 * dom.n())) / t);
}

}  // namespace

double MetricCover::cell_distance(const Point& x, int j) const { return min_distance(dom, x, nodes, cells[j].nodes); }

int MetricCover::locate(const Point& x) const {
  int best = 0;
  double bd = std::numeric_limits<double>::infinity();
  for (size_t j = 0; j < cells.size(); ++j) {
    const double d = dom.distance(x, cells[j].center);
    if (d < bd) {
      bd = d;
      best = static_cast<int>(j);
    }
  }
  return best;
}

std::vector<int> MetricCover::cells_within(const Point& x, double r) const {
  std::vector<int> out;
  for (size_t j = 0; j < cells.size(); ++j) {
    const double dc = dom.distance(x, cells[j].center);
    if (dc - cells[j].radius > r) continue;
    if (dc <= r || cell_distance(x, static_cast<int>(j)) <= r) out.push_back(static_cast<int>(j));
  }
  return out;
}

MetricCover build_cover(const Domain& dom, double t, double extent, int density) {
  if (!(t > 0.0 && t < 1.0)) throw Error(ErrorCode::InvalidArgument, "cover parameter t must lie in (0,1)");
  if (!(extent > 0.0 && extent < 1.0)) throw Error(ErrorCode::InvalidArgument, "cover extent must lie in (0,1)");
  if (density < 1) throw Error(ErrorCode::InvalidArgument, "cover density must be positive");
  MetricCover c;
  c.dom = dom;
  c.t = t;
  c.extent = extent;
  const double s = c.spacing();
  c.nodes = dom.kind() == DomainKind::UnitDisk ? disk_cover_nodes(dom, s / density, extent)
                                               : rule_cover_nodes(dom, extent);

  // Greedy net; recent centers are the likeliest to be close, so test them first. On the
  // disk the candidates come from the density-1 grid, so refining the nodes keeps the centers.
  const std::vector<Point> candidates =
      dom.kind() == DomainKind::UnitDisk ? disk_cover_nodes(dom, s, extent) : c.nodes;
  std::vector<Point> centers;
  for (const auto& x : candidates) {
    bool far = true;
    for (auto it = centers.rbegin(); it != centers.rend(); ++it)
      if (dom.distance(x, *it) < s) {
        far = false;
        break;
      }
    if (far) centers.push_back(x);
  }
  c.cells.resize(centers.size());
  for (size_t j = 0; j < centers.size(); ++j) c.cells[j].center = centers[j];

  const size_t nn = c.nodes.size();
  c.owner.assign(nn, -1);
  std::vector<double> own_dist(nn);
  parallel_chunks(chunk_count(nn, 256), [&](size_t ch) {
    for (size_t i = ch * 256; i < std::min(nn, (ch + 1) * 256); ++i) {
      double bd = std::numeric_limits<double>::infinity();
      for (size_t j = 0; j < centers.size(); ++j) {
        const double d = dom.distance(c.nodes[i], c.cells[j].center);
        if (d < bd) {
          bd = d;
          c.owner[i] = static_cast<int>(j);
        }
      }
      own_dist[i] = bd;
    }
  });
  for (size_t i = 0; i < nn; ++i) {
    Cell& cell = c.cells[c.owner[i]];
    cell.nodes.push_back(static_cast<int>(i));
    cell.radius = std::max(cell.radius, own_dist[i]);
  }

  std::vector<double> diam(c.cells.size(), 0.0);
  parallel_chunks(c.cells.size(), [&](size_t j) {
    const auto& idx = c.cells[j].nodes;
    for (size_t a = 0; a < idx.size(); ++a)
      for (size_t b = a + 1; b < idx.size(); ++b)
        diam[j] = std::max(diam[j], dom.distance(c.nodes[idx[a]], c.nodes[idx[b]]));
  });
  c.diameter = *std::max_element(diam.begin(), diam.end());

  std::vector<int> count(nn, 0);
  parallel_chunks(chunk_count(nn, 256), [&](size_t ch) {
    for (size_t i = ch * 256; i < std::min(nn, (ch + 1) * 256); ++i)
      count[i] = static_cast<int>(c.cells_within(c.nodes[i], 1.0 / t).size());
  });
  c.overlap = *std::max_element(count.begin(), count.end());
  return c;
}

std::vector<PartitionValue> PartitionOfUnity::values(const Point& x) const {
  const MetricCover& c = *cover_;
  check_in_extent(c, x);
  const double t = c.t;
  std::vector<PartitionValue> out;
  double total = 0.0;
  for (int j : c.cells_within(x, 1.0 / t)) {
    const double d = c.cell_distance(x, j);
    const double rho = std::max(0.0, 1.0 - 3.0 * t * d);
    const double psi = std::clamp(3.0 - 3.0 * t * d, 0.0, 1.0);
    if (psi > 0.0) out.push_back({j, rho, psi});
    total += rho;
  }
  if (!(total > 0.0)) throw Error(ErrorCode::OutsideDomain, "no cell within 1/(3t) of the point");
  for (auto& v : out) v.phi /= total;
  return out;
}

double PartitionOfUnity::phi(int j, const Point& x) const {
  for (const auto& v : values(x))
    if (v.cell == j) return v.phi;
  return 0.0;
}

double PartitionOfUnity::psi(int j, const Point& x) const {
  for (const auto& v : values(x))
    if (v.cell == j) return v.psi;
  return 0.0;
}

bool PartitionCertificate::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const PropertyCheck& c) { return c.passed; });
}

PartitionCertificate certify_partition(const PartitionOfUnity& pu, int samples, uint64_t seed) {
  const MetricCover& c = pu.cover();
  const Domain& dom = c.dom;
  const double t = c.t;
  PartitionCertificate cert;

  // Cover invariants on the node set.
  std::vector<int> membership(c.nodes.size(), 0);
  for (const auto& cell : c.cells)
    for (int i : cell.nodes) ++membership[i];
  int multiple = 0, missing = 0;
  for (int m : membership) {
    multiple += m > 1;
    missing += m == 0;
  }
  cert.checks.push_back({"cover.disjoint", multiple == 0, static_cast<double>(multiple), 0.0, "nodes in more than one cell"});
  cert.checks.push_back({"cover.union", missing == 0, static_cast<double>(missing), 0.0, "nodes in no cell"});
  int worst_count = 0;
  for (size_t i = 0; i < c.nodes.size(); i += 7)
    worst_count = std::max(worst_count, static_cast<int>(c.cells_within(c.nodes[i], 1.0 / t).size()));
  cert.checks.push_back({"cover.overlap", worst_count <= c.overlap, static_cast<double>(worst_count),
                         static_cast<double>(c.overlap), "cells within 1/t of a node"});
  double worst_diam = 0.0;
  for (const auto& cell : c.cells)
    for (int i : cell.nodes) worst_diam = std::max(worst_diam, dom.distance(cell.center, c.nodes[i]));
  cert.checks.push_back({"cover.diameter", worst_diam <= c.diameter + 1e-12, worst_diam, c.diameter,
                         "center-to-node distance against C(t)"});

  // Partition properties at random points and nearby pairs.
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double step = 0.25 * c.spacing();
  double sum_err = 0.0, supp_phi = 0.0, supp_psi = 0.0, one_psi = 0.0, lip_phi = 0.0, lip_psi = 0.0;
  for (int s = 0; s < samples; ++s) {
    const Point x = random_in_extent(dom, rng, c.extent);
    const auto vx = pu.values(x);
    double total = 0.0;
    for (const auto& v : vx) {
      total += v.phi;
      const double d = c.cell_distance(x, v.cell);
      if (v.phi > 0.0) supp_phi = std::max(supp_phi, d - 1.0 / (3.0 * t));
      supp_psi = std::max(supp_psi, d - 1.0 / t);
      if (d <= 2.0 / (3.0 * t)) one_psi = std::max(one_psi, 1.0 - v.psi);
    }
    sum_err = std::max(sum_err, std::abs(total - 1.0));
    // Cells at distance < 1/(3t) must carry phi > 0; cells at distance < 1/t must carry psi > 0.
    for (int j : c.cells_within(x, 1.0 / t)) {
      const double d = c.cell_distance(x, j);
      const auto it = std::find_if(vx.begin(), vx.end(), [&](const PartitionValue& v) { return v.cell == j; });
      const double ph = it == vx.end() ? 0.0 : it->phi;
      if (d < 1.0 / (3.0 * t) && ph <= 0.0) supp_phi = std::max(supp_phi, 1.0 / (3.0 * t) - d);
      if (d < 1.0 / t && it == vx.end()) supp_psi = std::max(supp_psi, 1.0 / t - d);
    }

    // Partner point at beta-distance <= step: y = phi_x(v) with beta(0, v) small.
    Point v = random_in_extent(dom, rng, 1.0);
    const double target = step * u(rng);
    const double sg = std::sqrt(static_cast<double>(dom.genus()));
    v = v.scaled(std::tanh(target / sg) / dom.polar(v).max());
    const Point y = dom.phi(x, v);
    if (dom.polar(y).max() > c.extent) continue;
    const double b = dom.distance(x, y);
    if (!(b > 1e-9)) continue;
    const auto vy = pu.values(y);
    auto lookup = [](const std::vector<PartitionValue>& vals, int j) -> const PartitionValue* {
      for (const auto& v : vals)
        if (v.cell == j) return &v;
      return nullptr;
    };
    std::vector<int> ids;
    for (const auto& w : vx) ids.push_back(w.cell);
    for (const auto& w : vy) ids.push_back(w.cell);
    for (int j : ids) {
      const auto* a = lookup(vx, j);
      const auto* bb = lookup(vy, j);
      const double pa = a ? a->phi : 0.0, pb = bb ? bb->phi : 0.0;
      const double qa = a ? a->psi : 0.0, qb = bb ? bb->psi : 0.0;
      lip_phi = std::max(lip_phi, std::abs(pa - pb) / b);
      lip_psi = std::max(lip_psi, std::abs(qa - qb) / b);
    }
  }
  const double n = c.overlap;
  cert.checks.push_back({"(a) sum phi = 1", sum_err <= 1e-12, sum_err, 1e-12, "max |sum_j phi_j - 1|"});
  cert.checks.push_back({"(b) supp phi = Xi_1", supp_phi <= 1e-12, supp_phi, 0.0, "support violation in beta"});
  cert.checks.push_back({"(c) phi Lipschitz", lip_phi <= 6.0 * n * t + 1e-12, lip_phi, 6.0 * n * t,
                         "sampled quotient against 6Nt"});
  cert.checks.push_back({"(d) psi = 1 on Xi_2", one_psi <= 1e-12, one_psi, 0.0, "max 1 - psi on Xi_2"});
  cert.checks.push_back({"(e) supp psi = Xi_3", supp_psi <= 1e-12, supp_psi, 0.0, "support violation in beta"});
  cert.checks.push_back({"(f) psi Lipschitz", lip_psi <= 3.0 * t + 1e-12, lip_psi, 3.0 * t,
                         "sampled quotient against 3t"});
  return cert;
}

PartitionOfUnity build_partition(std::shared_ptr<const MetricCover> cover, int samples, uint64_t seed) {
  PartitionOfUnity pu(std::move(cover));
  const PartitionCertificate cert = certify_partition(pu, samples, seed);
  for (const auto& c : cert.checks)
    if (!c.passed) {
      std::ostringstream os;
      os << "partition property " << c.name << " failed: " << c.detail << " " << c.worst << " > " << c.bound;
      throw Error(ErrorCode::Accuracy, os.str());
    }
  return pu;
}

KernelOperator KernelOperator::identity(const Domain& dom, double nu, cplx c) {
  KernelOperator k;
  k.dom = dom;
  k.nu = nu;
  k.scale = c;
  return k;
}

KernelOperator KernelOperator::multiplication(const Domain& dom, double nu, Symbol f) {
  KernelOperator k = identity(dom, nu);
  k.kind = KernelKind::Multiplication;
  k.f = std::move(f);
  return k;
}

KernelOperator KernelOperator::projection(const Domain& dom, double nu) {
  KernelOperator k = identity(dom, nu);
  k.kind = KernelKind::Projection;
  return k;
}

KernelOperator KernelOperator::toeplitz(const Domain& dom, double nu, Symbol f) {
  KernelOperator k = identity(dom, nu);
  k.kind = KernelKind::Toeplitz;
  k.f = std::move(f);
  return k;
}

KernelOperator KernelOperator::rank_one(const Domain& dom, double nu, const Point& a) {
  if (!dom.interior(a)) throw Error(ErrorCode::OutsideDomain, "rank-one kernel point must be interior");
  KernelOperator k = identity(dom, nu);
  k.kind = KernelKind::RankOne;
  k.a = a;
  return k;
}

KernelOperator KernelOperator::matrix_backed(const OperatorMatrix& m) {
  KernelOperator k = identity(m.basis->domain(), m.basis->ctx().nu);
  k.kind = KernelKind::MatrixBacked;
  k.matrix = m;
  return k;
}

std::string KernelOperator::label() const {
  switch (kind) {
    case KernelKind::Identity: return "I";
    case KernelKind::Multiplication: return "M[" + f.label() + "]";
    case KernelKind::Projection: return "P";
    case KernelKind::Toeplitz: return "T[" + f.label() + "]";
    case KernelKind::RankOne: return "k_a (x) k_a";
    case KernelKind::MatrixBacked: return matrix->label;
  }
  return "?";
}

NodeSet truncated_nodes(const Domain& dom, double nu, double extent, bool fine) {
  QuadratureRule rule = fine                                     ? build_rule(dom, nu)
                        : dom.kind() == DomainKind::UnitDisk     ? build_rule(dom, nu, 32, 64)
                        : dom.kind() == DomainKind::MatrixBall   ? build_rule(dom, nu, 2, 3)
                        : dom.n() == 2                           ? build_rule(dom, nu, 10, 8)
                                                                 : build_rule(dom, nu, 6, 4);
  NodeSet ns;
  for (size_t i = 0; i < rule.size(); ++i)
    if (dom.polar(rule.nodes[i]).max() <= extent) {
      ns.nodes.push_back(rule.nodes[i]);
      ns.weights.push_back(rule.weights[i]);
    }
  if (ns.nodes.empty()) throw Error(ErrorCode::InvalidArgument, "no quadrature node inside the extent");
  return ns;
}

Eigen::MatrixXcd nystrom_block(const KernelOperator& a, const NodeSet& ns, const std::vector<int>& rows,
                               const std::vector<int>& cols) {
  const auto nr = static_cast<Eigen::Index>(rows.size());
  const auto nc = static_cast<Eigen::Index>(cols.size());
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(nr, nc);
  const Domain& dom = a.dom;
  if (a.diagonal()) {
    for (Eigen::Index r = 0; r < nr; ++r)
      for (Eigen::Index c = 0; c < nc; ++c)
        if (rows[r] == cols[c])
          out(r, c) = a.scale * (a.kind == KernelKind::Identity ? cplx(1.0) : a.f(ns.nodes[rows[r]]));
    return out;
  }
  if (a.kind == KernelKind::MatrixBacked) {
    const Basis& b = *a.matrix->basis;
    Eigen::MatrixXcd er(nr, b.size()), ec(nc, b.size());
    for (Eigen::Index r = 0; r < nr; ++r) er.row(r) = std::sqrt(ns.weights[rows[r]]) * b.eval(ns.nodes[rows[r]]).transpose();
    for (Eigen::Index c = 0; c < nc; ++c) ec.row(c) = std::sqrt(ns.weights[cols[c]]) * b.eval(ns.nodes[cols[c]]).transpose();
    return a.scale * (er * a.matrix->m * ec.adjoint());
  }
  const double e = a.nu + dom.genus();
  std::vector<cplx> right(cols.size());
  for (size_t c = 0; c < cols.size(); ++c) {
    const Point& y = ns.nodes[cols[c]];
    cplx v = std::sqrt(ns.weights[cols[c]]);
    if (a.kind == KernelKind::Toeplitz) v *= a.f(y);
    if (a.kind == KernelKind::RankOne) v *= std::conj(std::pow(dom.h(a.a, a.a).real(), e / 2) * dom.h_pow(y, a.a, -e));
    right[c] = v;
  }
  parallel_chunks(chunk_count(rows.size(), 32), [&](size_t ch) {
    for (size_t r = ch * 32; r < std::min(rows.size(), (ch + 1) * 32); ++r) {
      const Point& x = ns.nodes[rows[r]];
      const double wr = std::sqrt(ns.weights[rows[r]]);
      if (a.kind == KernelKind::RankOne) {
        const cplx kx = wr * std::pow(dom.h(a.a, a.a).real(), e / 2) * dom.h_pow(x, a.a, -e);
        for (size_t c = 0; c < cols.size(); ++c) out(r, c) = a.scale * kx * right[c];
      } else {
        for (size_t c = 0; c < cols.size(); ++c)
          out(r, c) = a.scale * wr * dom.h_pow(x, ns.nodes[cols[c]], -e) * right[c];
      }
    }
  });
  return out;
}

Eigen::MatrixXcd nystrom_matrix(const KernelOperator& a, const NodeSet& ns) {
  std::vector<int> all(ns.nodes.size());
  for (size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
  return nystrom_block(a, ns, all, all);
}

namespace {

// Largest singular value by power iteration on M^* M from a fixed start vector.
double power_norm(Eigen::Index n, const std::function<Eigen::VectorXcd(const Eigen::VectorXcd&)>& apply,
                  const std::function<Eigen::VectorXcd(const Eigen::VectorXcd&)>& apply_adjoint) {
  if (n == 0) return 0.0;
  Eigen::VectorXcd v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = cplx(1.0 + 0.01 * (i % 7), 0.003 * (i % 11));
  v.normalize();
  double est = 0.0;
  for (int it = 0; it < 300; ++it) {
    Eigen::VectorXcd w = apply_adjoint(apply(v));
    const double nw = w.norm();
    if (nw == 0.0) return 0.0;
    const double next = std::sqrt(nw);
    v = w / nw;
    if (std::abs(next - est) <= 1e-8 * next) return next;
    est = next;
  }
  return est;
}

std::vector<int> strided(int n, int max_count) {
  std::vector<int> out;
  if (n <= max_count) {
    for (int i = 0; i < n; ++i) out.push_back(i);
  } else {
    for (int k = 0; k < max_count; ++k) out.push_back(static_cast<int>((static_cast<long>(k) * n) / max_count));
  }
  return out;
}

}  // namespace

std::vector<BandPoint> band_profile(const KernelOperator& a, const std::vector<double>& omegas, const BandOptions& opt) {
  const Domain& dom = a.dom;
  const MetricCover cover = build_cover(dom, opt.t, opt.extent);
  const NodeSet ns = truncated_nodes(dom, a.nu, opt.extent, true);
  std::vector<std::vector<int>> members(cover.cells.size());
  std::vector<int> owner(ns.nodes.size());
  parallel_chunks(chunk_count(ns.nodes.size(), 256), [&](size_t ch) {
    for (size_t i = ch * 256; i < std::min(ns.nodes.size(), (ch + 1) * 256); ++i) owner[i] = cover.locate(ns.nodes[i]);
  });
  for (size_t i = 0; i < owner.size(); ++i) members[owner[i]].push_back(static_cast<int>(i));
  std::vector<int> used;
  for (size_t j = 0; j < members.size(); ++j)
    if (!members[j].empty()) used.push_back(static_cast<int>(j));
  std::vector<int> cells;
  for (int k : strided(static_cast<int>(used.size()), opt.max_cells)) cells.push_back(used[k]);

  struct PairValue {
    double dist, norm;
  };
  std::vector<std::pair<int, int>> pairs;
  for (size_t i = 0; i < cells.size(); ++i)
    for (size_t j = 0; j < cells.size(); ++j)
      if (i != j) pairs.emplace_back(cells[i], cells[j]);
  std::vector<PairValue> values(pairs.size());
  parallel_chunks(pairs.size(), [&](size_t k) {
    const auto& e = members[pairs[k].first];
    const auto& f = members[pairs[k].second];
    double d = std::numeric_limits<double>::infinity();
    for (int x : e)
      for (int y : f) d = std::min(d, dom.distance(ns.nodes[x], ns.nodes[y]));
    values[k] = {d, d > 0.0 ? spectral_norm(nystrom_block(a, ns, e, f)) : 0.0};
  });
  std::vector<BandPoint> out;
  for (double w : omegas) {
    BandPoint bp{w, 0.0, 0};
    for (const auto& v : values)
      if (v.dist >= w) {
        bp.norm = std::max(bp.norm, v.norm);
        ++bp.pairs;
      }
    out.push_back(bp);
  }
  return out;
}

double commutator_decay(const KernelOperator& a, const PartitionOfUnity& pu, double p, int max_cells) {
  if (a.diagonal()) return 0.0;
  const MetricCover& cover = pu.cover();
  const NodeSet ns = truncated_nodes(a.dom, a.nu, cover.extent, false);
  const Eigen::MatrixXcd b = nystrom_matrix(a, ns);
  const auto n = static_cast<Eigen::Index>(ns.nodes.size());
  std::vector<std::vector<PartitionValue>> vals(ns.nodes.size());
  parallel_chunks(ns.nodes.size(), [&](size_t i) { vals[i] = pu.values(ns.nodes[i]); });
  double sup = 0.0;
  for (int j : strided(static_cast<int>(cover.cells.size()), max_cells)) {
    Eigen::VectorXd av = Eigen::VectorXd::Zero(n);
    for (Eigen::Index i = 0; i < n; ++i)
      for (const auto& v : vals[i])
        if (v.cell == j) av(i) = std::pow(v.phi, 1.0 / p);
    std::vector<Eigen::Index> supp;
    for (Eigen::Index i = 0; i < n; ++i)
      if (av(i) > 0.0) supp.push_back(i);
    if (supp.empty()) continue;
    // C_ik = B_ik (a_k - a_i) vanishes unless i or k is in the support, so power iteration
    // only needs the columns and rows of B indexed by the support.
    const auto ns_ = static_cast<Eigen::Index>(supp.size());
    Eigen::MatrixXcd bc(n, ns_), br(ns_, n);
    Eigen::VectorXd as(ns_);
    for (Eigen::Index k = 0; k < ns_; ++k) {
      bc.col(k) = b.col(supp[k]);
      br.row(k) = b.row(supp[k]);
      as(k) = av(supp[k]);
    }
    auto apply = [&](const Eigen::VectorXcd& v) {
      Eigen::VectorXcd vs(ns_);
      for (Eigen::Index k = 0; k < ns_; ++k) vs(k) = as(k) * v(supp[k]);
      Eigen::VectorXcd out = bc * vs;
      const Eigen::VectorXcd rows = br * v;
      for (Eigen::Index k = 0; k < ns_; ++k) out(supp[k]) -= as(k) * rows(k);
      return out;
    };
    auto apply_adjoint = [&](const Eigen::VectorXcd& w) {
      Eigen::VectorXcd ws(ns_);
      for (Eigen::Index k = 0; k < ns_; ++k) ws(k) = as(k) * w(supp[k]);
      Eigen::VectorXcd out = -(br.adjoint() * ws);
      const Eigen::VectorXcd cols = bc.adjoint() * w;
      for (Eigen::Index k = 0; k < ns_; ++k) out(supp[k]) += as(k) * cols(k);
      return out;
    };
    sup = std::max(sup, power_norm(n, apply, apply_adjoint));
  }
  return sup;
}

namespace {

// Random polynomial of degree <= 3 in the coordinates.
std::function<cplx(const Point&)> random_poly(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const auto idx = graded_lex(n, 3);
  std::vector<cplx> coef(idx.size());
  for (auto& c : coef) c = {u(rng), u(rng)};
  return [idx, coef](const Point& x) {
    cplx s = 0.0;
    for (size_t k = 0; k < idx.size(); ++k) {
      cplx m = coef[k];
      for (int i = 0; i < x.n; ++i) m *= std::pow(x[i], idx[k].e[i]);
      s += m;
    }
    return s;
  };
}

}  // namespace

LocalizationNorms localization_norms(const KernelOperator& a, const Region& f, const PartitionOfUnity& pu, uint64_t seed) {
  const MetricCover& cover = pu.cover();
  const Domain& dom = a.dom;
  const NodeSet ns = truncated_nodes(dom, a.nu, cover.extent, false);
  std::vector<int> in_f;
  for (size_t i = 0; i < ns.nodes.size(); ++i)
    if (f(ns.nodes[i])) in_f.push_back(static_cast<int>(i));
  if (in_f.empty()) throw Error(ErrorCode::InvalidArgument, "the region holds no quadrature node");
  const Eigen::MatrixXcd b = nystrom_matrix(a, ns);
  const double rt = pu.support_diameter();
  const WeightContext ctx = WeightContext::make(dom, a.nu, 2.0);
  std::mt19937_64 rng(seed);
  const auto n = static_cast<Eigen::Index>(ns.nodes.size());

  LocalizationNorms out;
  out.lower_norm = out.lower_norm_t = std::numeric_limits<double>::infinity();
  constexpr int kHalf = 32;
  for (int m = 0; m < 2 * kHalf; ++m) {
    const bool ball = m < kHalf;
    const int k = m % kHalf;
    const Point w = ns.nodes[in_f[(static_cast<size_t>(k) * in_f.size()) / kHalf]];
    std::function<cplx(const Point&)> g;
    if (k % 2 == 0) {
      const Point c = ball ? w : ns.nodes[in_f[std::uniform_int_distribution<size_t>(0, in_f.size() - 1)(rng)]];
      g = reproducing_kernel(dom, ctx, c, 2.0);
    } else {
      g = random_poly(dom.n(), rng);
    }
    Eigen::VectorXcd u = Eigen::VectorXcd::Zero(n);
    for (int i : in_f)
      if (!ball || dom.distance(ns.nodes[i], w) <= rt) u(i) = std::sqrt(ns.weights[i]) * g(ns.nodes[i]);
    const double nu = u.norm();
    if (!(nu > 0.0)) continue;
    u /= nu;
    const double v = (b * u).norm();
    out.norm_f = std::max(out.norm_f, v);
    out.lower_norm = std::min(out.lower_norm, v);
    if (ball) {
      out.triple_norm = std::max(out.triple_norm, v);
      out.lower_norm_t = std::min(out.lower_norm_t, v);
      ++out.ball_probes;
    }
    ++out.probes;
  }
  return out;
}

}  // namespace bl
