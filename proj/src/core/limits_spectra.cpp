#include "bergman_limits/limits_spectra.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "bergman_limits/bandstruct.hpp"
#include "bergman_limits/parallel.hpp"

namespace bl {
namespace {

// Rescales u so that its largest polar value is 1.
Point unit_direction(const Domain& dom, const Point& u) {
  dom.check_dim(u);
  const double t = dom.polar(u).max();
  if (!(t > 0.0) || !u.finite()) throw Error(ErrorCode::InvalidArgument, "sequence direction must be a nonzero finite point");
  return u.scaled(1.0 / t);
}

// Fixed-seed Gaussian directions (first coordinate direction first on the balls).
std::vector<Point> gaussian_directions(const Domain& dom, int count, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  std::vector<Point> out;
  for (int k = 0; k < count; ++k) {
    Point u(dom.n());
    for (int i = 0; i < dom.n(); ++i) u[i] = {g(rng), g(rng)};
    out.push_back(unit_direction(dom, u));
  }
  return out;
}

std::vector<Point> directions(const Domain& dom, int count, uint64_t seed) {
  if (dom.kind() != DomainKind::UnitDisk) return gaussian_directions(dom, count, seed);
  std::vector<Point> out;
  for (int k = 0; k < count; ++k) out.push_back(Point{std::polar(1.0, 2.0 * M_PI * k / count)});
  return out;
}

Point first_axis(const Domain& dom) {
  Point u(dom.n());
  u[0] = 1.0;
  if (dom.kind() == DomainKind::MatrixBall) u[3] = 1.0;
  return u;
}

bool all_vo(const OperatorMatrix& a) {
  if (!a.words) return false;
  for (const auto& w : a.words->words)
    for (const auto& f : w)
      if (!f.is_constant() && f.vo != true) return false;
  return true;
}

// The single symbol of c T_f, if A has that form.
std::optional<Symbol> single_symbol(const OperatorMatrix& a) {
  if (!a.words || a.words->words.size() != 1 || a.words->words[0].size() != 1) return std::nullopt;
  return a.words->words[0][0].scaled(a.words->coeff[0]);
}

Eigen::MatrixXcd identity_like(const OperatorMatrix& a) { return Eigen::MatrixXcd::Identity(a.size(), a.size()); }

std::vector<Eigen::VectorXcd> probe_vectors(int n) {
  std::vector<Eigen::VectorXcd> out;
  auto unit = [n](int k) {
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(n);
    v(k) = 1.0;
    return v;
  };
  out.push_back(unit(0));
  if (n > 1) {
    out.push_back(unit(1));
    out.push_back((unit(0) + unit(1)) / std::sqrt(2.0));
    out.push_back(unit(n - 1));
  }
  return out;
}

OperatorMatrix shifted_checked(const OperatorMatrix& a, const BoundarySequence& seq, int m) {
  OperatorMatrix out = shifted_operator(a, seq.point(m));
  if (a.words || a.finite_rank || out.spill <= kLimitSpillBudget) return out;
  int best = 0;
  for (int k = m - 1; k >= 1 && best == 0; --k)
    if (shift_isometry_matrix(a.basis, seq.point(k), a.p).spill <= kLimitSpillBudget) best = k;
  std::ostringstream os;
  os << "shift spill " << out.spill << " exceeds " << kLimitSpillBudget << " at m = " << m << " on " << seq.label()
     << "; largest admissible m = " << best;
  throw Error(ErrorCode::Accuracy, os.str());
}

}  // namespace

double sequence_radius(int k) { return 1.0 - std::ldexp(1.0, -(k + 5)); }

BoundarySequence BoundarySequence::radial_ray(const Domain& dom, const Point& direction) {
  BoundarySequence s(SequenceKind::RadialRay, dom);
  s.direction_ = unit_direction(dom, direction);
  std::ostringstream os;
  os << "ray(" << s.direction_[0].real() << (s.direction_[0].imag() < 0 ? "" : "+") << s.direction_[0].imag() << "i";
  os << (dom.n() > 1 ? ",...)" : ")");
  s.label_ = os.str();
  return s;
}

BoundarySequence BoundarySequence::tangential_spiral(const Domain& dom, const Point& direction, double theta0,
                                                     double step) {
  BoundarySequence s(SequenceKind::TangentialSpiral, dom);
  s.direction_ = unit_direction(dom, direction);
  s.theta0_ = theta0;
  s.step_ = step;
  std::ostringstream os;
  os << "spiral(" << theta0 << "," << step << ")";
  s.label_ = os.str();
  return s;
}

BoundarySequence BoundarySequence::custom(const Domain& dom, std::vector<Point> points, std::string label) {
  if (points.empty()) throw Error(ErrorCode::InvalidArgument, "custom sequence needs points");
  double prev = -1.0;
  for (const auto& z : points) {
    if (!dom.interior(z)) throw Error(ErrorCode::OutsideDomain, "custom sequence point is not interior");
    const double t = dom.polar(z).max();
    if (!(t > prev)) throw Error(ErrorCode::InvalidArgument, "custom sequence must have strictly increasing t_1");
    prev = t;
  }
  BoundarySequence s(SequenceKind::Custom, dom);
  s.points_ = std::move(points);
  s.label_ = std::move(label);
  return s;
}

Point BoundarySequence::point(int k) const {
  if (k < 1) throw Error(ErrorCode::InvalidArgument, "sequence index starts at 1");
  switch (kind_) {
    case SequenceKind::RadialRay:
      return direction_.scaled(sequence_radius(k));
    case SequenceKind::TangentialSpiral:
      return direction_.scaled(std::polar(sequence_radius(k), theta0_ + step_ * k));
    case SequenceKind::Custom:
      if (k > static_cast<int>(points_.size()))
        throw Error(ErrorCode::InvalidArgument, "custom sequence has only " + std::to_string(points_.size()) + " points");
      return points_[k - 1];
  }
  throw Error(ErrorCode::Internal, "unknown sequence kind");
}

std::vector<Point> BoundarySequence::samples(int m) const {
  std::vector<Point> out;
  for (int k = 1; k <= m; ++k) out.push_back(point(k));
  return out;
}

std::vector<BoundarySequence> default_sequences(const Domain& dom) {
  std::vector<BoundarySequence> out;
  for (const auto& u : directions(dom, 8, 17)) out.push_back(BoundarySequence::radial_ray(dom, u));
  out.push_back(BoundarySequence::tangential_spiral(dom, first_axis(dom)));
  return out;
}

LimitApproximant approx_limit_operator(const OperatorMatrix& a, const BoundarySequence& seq, int m) {
  if (m < 2) throw Error(ErrorCode::InvalidArgument, "limit approximants need m >= 2");
  LimitApproximant out;
  out.m = m;
  out.z = seq.point(m);
  out.op = shifted_checked(a, seq, m);
  const OperatorMatrix prev = shifted_checked(a, seq, m - 1);
  const Eigen::MatrixXcd diff = out.op.m - prev.m;
  for (const auto& v : probe_vectors(a.size())) out.cauchy = std::max(out.cauchy, (diff * v).norm());
  return out;
}

std::vector<double> cauchy_profile(const OperatorMatrix& a, const BoundarySequence& seq, int m) {
  if (m < 2) throw Error(ErrorCode::InvalidArgument, "limit approximants need m >= 2");
  std::vector<double> out;
  const auto probes = probe_vectors(a.size());
  Eigen::MatrixXcd prev = shifted_checked(a, seq, 1).m;
  for (int k = 2; k <= m; ++k) {
    Eigen::MatrixXcd cur = shifted_checked(a, seq, k).m;
    double c = 0.0;
    for (const auto& v : probes) c = std::max(c, ((cur - prev) * v).norm());
    out.push_back(c);
    prev = std::move(cur);
  }
  return out;
}

std::string to_string(SpectrumMethod m) {
  switch (m) {
    case SpectrumMethod::BerezinShell:
      return "BerezinShell";
    case SpectrumMethod::FiniteSection:
      return "FiniteSection";
    case SpectrumMethod::LimitOperatorUnion:
      return "LimitOperatorUnion";
  }
  return "?";
}

std::vector<Point> shell_points(const Domain& dom, double t_min, double t_max, int grid) {
  if (grid < 1) throw Error(ErrorCode::InvalidArgument, "shell grid must be positive");
  if (!(t_min >= 0.0 && t_min <= t_max && t_max < 1.0))
    throw Error(ErrorCode::InvalidArgument, "shell must satisfy 0 <= t_min <= t_max < 1");
  const int nr = std::max(2, grid / 8);
  const auto dirs = directions(dom, grid, 29);
  std::vector<Point> out;
  for (int i = 0; i < nr; ++i) {
    const double r = t_min + (t_max - t_min) * i / (nr - 1);
    for (const auto& u : dirs) out.push_back(u.scaled(r));
  }
  return out;
}

namespace {

SpectrumEstimate berezin_cloud(const OperatorMatrix& a, std::vector<Point> pts, double t_min, double t_max, int grid) {
  SpectrumEstimate est;
  est.method = SpectrumMethod::BerezinShell;
  est.t_min = t_min;
  est.t_max = t_max;
  est.grid = grid;
  est.degree = a.basis->max_degree();
  est.points.resize(pts.size());
  parallel_chunks(pts.size(), [&](size_t i) { est.points[i] = berezin(a, pts[i]); });
  est.samples = std::move(pts);
  if (!all_vo(a))
    est.caveat = "symbols not known to be VMO at the boundary; shell values approximate spec_ess only under that hypothesis";
  return est;
}

}  // namespace

SpectrumEstimate essential_spectrum_berezin(const OperatorMatrix& a, double t_min, double t_max, int grid) {
  return berezin_cloud(a, shell_points(a.basis->domain(), t_min, t_max, grid), t_min, t_max, grid);
}

std::vector<SpectrumEstimate> nested_shells(const OperatorMatrix& a, const std::vector<double>& t_mins, double t_max,
                                            int grid) {
  if (t_mins.empty()) return {};
  const double lo = *std::min_element(t_mins.begin(), t_mins.end());
  const SpectrumEstimate outer = essential_spectrum_berezin(a, lo, t_max, grid);
  std::vector<SpectrumEstimate> out;
  for (double t : t_mins) {
    SpectrumEstimate est = outer;
    est.t_min = t;
    est.points.clear();
    est.samples.clear();
    for (size_t i = 0; i < outer.samples.size(); ++i)
      if (a.basis->domain().polar(outer.samples[i]).max() >= t - 1e-12) {
        est.points.push_back(outer.points[i]);
        est.samples.push_back(outer.samples[i]);
      }
    out.push_back(std::move(est));
  }
  return out;
}

SpectrumEstimate finite_section_spectrum(const OperatorMatrix& a) {
  SpectrumEstimate est;
  est.method = SpectrumMethod::FiniteSection;
  est.degree = a.basis->max_degree();
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(a.m, false);
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) est.points.push_back(es.eigenvalues()(i));
  std::sort(est.points.begin(), est.points.end(), [](cplx x, cplx y) {
    return x.real() != y.real() ? x.real() < y.real() : x.imag() < y.imag();
  });
  est.caveat = "finite sections need not converge to the essential spectrum";
  return est;
}

SpectrumEstimate limit_operator_spectrum(const OperatorMatrix& a, const std::vector<BoundarySequence>& seqs, int m) {
  SpectrumEstimate est;
  est.method = SpectrumMethod::LimitOperatorUnion;
  est.degree = a.basis->max_degree();
  std::vector<std::vector<cplx>> parts(seqs.size());
  parallel_chunks(seqs.size(), [&](size_t s) {
    const auto op = shifted_checked(a, seqs[s], m);
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(op.m, false);
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) parts[s].push_back(es.eigenvalues()(i));
  });
  for (const auto& p : parts) est.points.insert(est.points.end(), p.begin(), p.end());
  return est;
}

double excess(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  if (a.empty()) return 0.0;
  if (b.empty()) return std::numeric_limits<double>::infinity();
  double worst = 0.0;
  for (const auto& x : a) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& y : b) best = std::min(best, std::abs(x - y));
    worst = std::max(worst, best);
  }
  return worst;
}

double hausdorff(const std::vector<cplx>& a, const std::vector<cplx>& b) { return std::max(excess(a, b), excess(b, a)); }

double hausdorff_to_circle(const std::vector<cplx>& a, cplx center, double radius) {
  if (a.empty()) return std::numeric_limits<double>::infinity();
  double out = 0.0;
  for (const auto& x : a) out = std::max(out, std::abs(std::abs(x - center) - radius));
  // Circle to set: the largest angular gap decides. Sort the angles of the points around
  // the center; the circle point in the middle of a gap is the farthest from the set.
  std::vector<double> ang;
  for (const auto& x : a) ang.push_back(std::arg(x - center));
  std::sort(ang.begin(), ang.end());
  constexpr int kSub = 64;
  for (size_t i = 0; i < ang.size(); ++i) {
    const double lo = ang[i];
    const double hi = i + 1 < ang.size() ? ang[i + 1] : ang[0] + 2.0 * M_PI;
    for (int s = 0; s <= kSub; ++s) {
      const cplx c = center + std::polar(radius, lo + (hi - lo) * s / kSub);
      double best = std::numeric_limits<double>::infinity();
      for (const auto& x : a) best = std::min(best, std::abs(c - x));
      out = std::max(out, best);
    }
  }
  return out;
}

double diameter(const std::vector<cplx>& a) {
  double d = 0.0;
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = i + 1; j < a.size(); ++j) d = std::max(d, std::abs(a[i] - a[j]));
  return d;
}

EssentialNormBounds essential_norm_bounds(const OperatorMatrix& a, const std::vector<BoundarySequence>& seqs, int m) {
  if (seqs.empty()) throw Error(ErrorCode::InvalidArgument, "essential norm bounds need at least one sequence");
  EssentialNormBounds out;
  out.per_sequence.resize(seqs.size());
  parallel_chunks(seqs.size(), [&](size_t s) { out.per_sequence[s] = spectral_norm(shifted_checked(a, seqs[s], m).m); });
  out.proxy = *std::max_element(out.per_sequence.begin(), out.per_sequence.end());
  const int k0 = a.basis->count_upto(a.basis->max_degree() / 2 - 1);
  const int n = a.size() - k0;
  out.tail_proxy = n > 0 ? spectral_norm(a.m.bottomRightCorner(n, n)) : 0.0;
  out.lower = out.upper = out.proxy;
  if (a.p != 2.0)
    out.caveat = "p != 2: the bounds use the p = 2 matrix norm as a surrogate; the factor |P_nu| on L^p is not applied";
  return out;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::CompactConsistent:
      return "compact-consistent";
    case Verdict::NotCompact:
      return "not-compact";
    case Verdict::InvertibleConsistent:
      return "invertible-consistent";
    case Verdict::NotInvertible:
      return "not-invertible";
    case Verdict::Inconclusive:
      return "inconclusive";
  }
  return "?";
}

CompactnessReport compactness_test(const OperatorMatrix& a, const std::vector<BoundarySequence>& seqs, int m,
                                   double t_min, double t_max, int grid, const Thresholds& th) {
  CompactnessReport rep;
  auto outcome = [&](std::string name, double value, double threshold, std::string detail) {
    CheckOutcome c{std::move(name), value, threshold, value <= threshold, value > th.robust_factor * threshold,
                   std::move(detail)};
    rep.checks.push_back(std::move(c));
  };
  auto failed = [&](std::string name, double threshold, const std::exception& e) {
    rep.checks.push_back({std::move(name), std::numeric_limits<double>::quiet_NaN(), threshold, false, false, e.what()});
  };

  try {
    rep.shell = essential_spectrum_berezin(a, t_min, t_max, grid);
    double worst = 0.0;
    for (const auto& v : rep.shell.points) worst = std::max(worst, std::abs(v));
    outcome("berezin_shell", worst, th.berezin_decay, "max |B(A)| on the shell");
  } catch (const Error& e) {
    failed("berezin_shell", th.berezin_decay, e);
  }

  try {
    if (seqs.empty()) throw Error(ErrorCode::InvalidArgument, "no sequences supplied");
    rep.approximant_norms = essential_norm_bounds(a, seqs, m).per_sequence;
    outcome("limit_approximants", *std::max_element(rep.approximant_norms.begin(), rep.approximant_norms.end()),
            th.approximant, "max |A_{z_m}| over the sequences");
  } catch (const Error& e) {
    failed("limit_approximants", th.approximant, e);
  }

  try {
    if (a.words) {
      outcome("band_profile", 0.0, th.band_ratio, "Toeplitz-algebra element: band-dominated by construction");
    } else {
      const auto prof = band_profile(KernelOperator::matrix_backed(a), {1, 2, 3, 4});
      const double first = prof.front().norm, last = prof.back().norm;
      const double ratio = first > 0.0 ? last / first : 0.0;
      outcome("band_profile", ratio, th.band_ratio, "profile(omega=4) / profile(omega=1) on the Nystrom grid");
      // A slowly decaying profile says little about compactness, so it never fails robustly.
      rep.checks.back().robust_failure = false;
    }
  } catch (const Error& e) {
    failed("band_profile", th.band_ratio, e);
  }

  bool all = true, robust = false;
  for (const auto& c : rep.checks) {
    all = all && c.passed;
    robust = robust || c.robust_failure;
  }
  rep.verdict = all ? Verdict::CompactConsistent : robust ? Verdict::NotCompact : Verdict::Inconclusive;
  return rep;
}

std::vector<double> default_oscillation_radii() { return {0.5, 0.6, 0.7, 0.8, 0.9, 0.95, 0.99}; }

namespace {

// Points u with beta(0, u) = rho_i, rho_i = i/8, i = 1..8, along 32 directions.
std::vector<Point> bergman_ball_sample(const Domain& dom) {
  std::vector<Point> out;
  const auto dirs = directions(dom, 32, 31);
  for (const auto& d : dirs) {
    for (int i = 1; i <= 8; ++i) {
      const double rho = i / 8.0;
      double lo = 0.0, hi = 1.0 - 1e-15;
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (dom.distance_from_origin(d.scaled(mid)) < rho ? lo : hi) = mid;
      }
      out.push_back(d.scaled(lo));
    }
  }
  return out;
}

OscillationReport oscillation_impl(const Domain& dom, const std::function<cplx(const Point&)>& f,
                                   const std::function<cplx(const Point&, cplx)>& mo, const std::vector<double>& radii,
                                   const Point& direction, const Thresholds& th) {
  if (radii.empty()) throw Error(ErrorCode::InvalidArgument, "oscillation report needs radii");
  const Point u = unit_direction(dom, direction);
  const auto ball = bergman_ball_sample(dom);
  OscillationReport rep;
  rep.entries.resize(radii.size());
  parallel_chunks(radii.size(), [&](size_t k) {
    const Point z = u.scaled(radii[k]);
    if (!dom.interior(z)) throw Error(ErrorCode::OutsideDomain, "oscillation radius must be below 1");
    const cplx fz = f(z);
    double osc = 0.0;
    for (const auto& v : ball) osc = std::max(osc, std::abs(fz - f(dom.phi(z, v))));
    rep.entries[k] = {z, osc, mo(z, fz).real()};
  });

  // Least-squares slope of Osc against beta(0, z).
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(radii.size());
  for (const auto& e : rep.entries) {
    const double x = dom.distance_from_origin(e.z);
    sx += x;
    sy += e.osc;
    sxx += x * x;
    sxy += x * e.osc;
  }
  const double den = n * sxx - sx * sx;
  rep.slope = den > 0.0 ? (n * sxy - sx * sy) / den : 0.0;

  bool monotone = true;
  for (size_t k = 1; k < rep.entries.size(); ++k)
    monotone = monotone && rep.entries[k].osc <= rep.entries[k - 1].osc + 1e-12;
  const double last = rep.entries.back().osc;
  rep.vo_certified = monotone && last <= th.vo_oscillation;
  std::ostringstream os;
  os << (monotone ? "Osc non-increasing" : "Osc increases somewhere") << "; last Osc " << last << " against "
     << th.vo_oscillation;
  rep.detail = os.str();
  return rep;
}

}  // namespace

OscillationReport oscillation_report(const Domain& dom, double nu, const Symbol& f, const std::vector<double>& radii,
                                     const Point& direction, const Thresholds& th) {
  auto mo = [&](const Point& z, cplx) {
    const cplx c = berezin_symbol(dom, nu, f, z);
    const Symbol dev = Symbol::callable(
        "mo", [f, c](const Point& w) { return cplx(std::norm(f(w) - c)); }, 4.0 * f.bound() * f.bound());
    return berezin_symbol(dom, nu, dev, z);
  };
  return oscillation_impl(dom, f, mo, radii, direction, th);
}

OscillationReport oscillation_report(const OperatorMatrix& a, const std::vector<double>& radii, const Point& direction,
                                     const Thresholds& th) {
  const Domain& dom = a.basis->domain();
  const double nu = a.basis->ctx().nu;
  auto f = [&a](const Point& w) { return berezin(a, w); };
  auto mo = [&](const Point& z, cplx bz) {
    // MO of the Berezin transform; the inner transform is sampled by the quadrature of the outer one.
    const Symbol dev = Symbol::callable(
        "mo", [&a, bz](const Point& w) { return cplx(std::norm(berezin(a, w) - bz)); }, 0.0);
    return berezin_symbol(dom, nu, dev, z);
  };
  return oscillation_impl(dom, f, mo, radii, direction, th);
}

double scalar_deviation(const OperatorMatrix& a, const BoundarySequence& seq, int m) {
  const Point z = seq.point(m);
  const auto op = shifted_checked(a, seq, m);
  return spectral_norm(op.m - berezin(a, z) * identity_like(a));
}

FredholmReport fredholm_test(const OperatorMatrix& a, const std::vector<BoundarySequence>& seqs, int m, cplx lambda,
                             const Thresholds& th) {
  if (seqs.empty()) throw Error(ErrorCode::InvalidArgument, "Fredholm test needs at least one sequence");
  if (m < 3) throw Error(ErrorCode::InvalidArgument, "Fredholm test needs m >= 3");
  FredholmReport rep;
  rep.lambda = lambda;
  rep.sequences.resize(seqs.size());
  std::vector<std::string> errors(seqs.size());
  const Eigen::MatrixXcd id = identity_like(a);
  parallel_chunks(seqs.size(), [&](size_t s) {
    SequenceDiagnostic& d = rep.sequences[s];
    d.label = seqs[s].label();
    d.z = seqs[s].point(m);
    try {
      Eigen::MatrixXcd last;
      for (int k = m - 2; k <= m; ++k) {
        last = shifted_checked(a, seqs[s], k).m;
        d.sigma_min.push_back(min_singular_value(last - lambda * id));
      }
      d.scalar_deviation = spectral_norm(last - berezin(a, d.z) * id);
    } catch (const Error& e) {
      errors[s] = e.what();
    }
  });

  bool complete = true, monotone = true;
  rep.min_sigma = std::numeric_limits<double>::infinity();
  for (size_t s = 0; s < seqs.size(); ++s) {
    const auto& sg = rep.sequences[s].sigma_min;
    if (!errors[s].empty() || sg.size() != 3) {
      complete = false;
      rep.caveat += rep.sequences[s].label + ": " + errors[s] + "; ";
      continue;
    }
    rep.min_sigma = std::min(rep.min_sigma, sg.back());
    for (size_t k = 1; k < sg.size(); ++k) monotone = monotone && sg[k] >= sg[k - 1] - 1e-12;
  }
  if (rep.min_sigma < th.sigma_min)
    rep.verdict = Verdict::NotInvertible;
  else if (complete && monotone)
    rep.verdict = Verdict::InvertibleConsistent;
  else
    rep.verdict = Verdict::Inconclusive;

  if (a.p != 2.0) rep.caveat += "p != 2: singular values of the p = 2 matrix surrogate; ";
  rep.caveat += "index not computed";

  // VO certification ties the approximants to B(A)(z_m) I.
  try {
    const Point dir = seqs.front().point(1);
    const auto f = single_symbol(a);
    const auto osc = f ? oscillation_report(a.basis->domain(), a.basis->ctx().nu, *f, default_oscillation_radii(), dir, th)
                       : oscillation_report(a, default_oscillation_radii(), dir, th);
    rep.vo_certified = osc.vo_certified;
  } catch (const Error&) {
    rep.vo_certified.reset();
  }
  return rep;
}

}  // namespace bl
