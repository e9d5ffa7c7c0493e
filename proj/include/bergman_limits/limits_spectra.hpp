#pragma once

// Limit operators along boundary sequences, Berezin-shell estimates of the essential
// spectrum, essential-norm proxies, and compactness / Fredholm / oscillation diagnostics.
// Everything is sequence-indexed: boundary points of the compactification are never
// represented, only sequences z_k with t_1(z_k) -> 1.

#include <optional>
#include <string>
#include <vector>

#include "bergman_limits/toeplitz.hpp"

namespace bl {

enum class SequenceKind { RadialRay, TangentialSpiral, Custom };

/// Polar radius of the k-th sample of the built-in sequences, 1 - 2^{-(k+5)} (k >= 1).
double sequence_radius(int k);

class BoundarySequence {
 public:
  /// z_k = sequence_radius(k) u, where u is rescaled so that its largest polar value is 1.
  static BoundarySequence radial_ray(const Domain& dom, const Point& direction);
  /// z_k = sequence_radius(k) e^{i (theta0 + step k)} u.
  static BoundarySequence tangential_spiral(const Domain& dom, const Point& direction, double theta0 = 0.0,
                                            double step = 0.7);
  /// Explicit points; t_1 must increase strictly and every point must be interior.
  static BoundarySequence custom(const Domain& dom, std::vector<Point> points, std::string label = "custom");

  SequenceKind kind() const { return kind_; }
  const std::string& label() const { return label_; }
  const Domain& domain() const { return dom_; }
  /// z_k, k >= 1. Custom sequences throw InvalidArgument beyond their length.
  Point point(int k) const;
  /// z_1 .. z_m.
  std::vector<Point> samples(int m) const;

 private:
  BoundarySequence(SequenceKind kind, const Domain& dom) : kind_(kind), dom_(dom) {}
  SequenceKind kind_;
  Domain dom_;
  std::string label_;
  Point direction_;
  double theta0_ = 0.0, step_ = 0.0;
  std::vector<Point> points_;
};

/// Eight radial rays and one tangential spiral. On the disk the rays point at the 8th roots
/// of unity; elsewhere the directions are drawn from a fixed-seed Gaussian.
std::vector<BoundarySequence> default_sequences(const Domain& dom);

struct LimitApproximant {
  OperatorMatrix op;  // U_{z_m} A U_{z_m} on the truncated basis
  Point z;
  int m = 0;
  double cauchy = 0.0;  // max over probes of |(A_{z_m} - A_{z_{m-1}}) v|
};

/// Largest tolerated shift spill for matrices without Toeplitz structure.
inline constexpr double kLimitSpillBudget = 1e-6;

/// A_{z_m} with its Cauchy diagnostic. Probes are e_0, e_1, (e_0 + e_1)/sqrt 2 and the
/// last basis vector. Toeplitz-algebra elements are shifted at function level; finite-rank
/// matrices are conjugated by the truncated shift exactly. Other matrices throw Accuracy
/// once the shift spill exceeds kLimitSpillBudget, naming the largest admissible m.
LimitApproximant approx_limit_operator(const OperatorMatrix& a, const BoundarySequence& seq, int m);

/// The Cauchy diagnostics for k = 2..m.
std::vector<double> cauchy_profile(const OperatorMatrix& a, const BoundarySequence& seq, int m);

enum class SpectrumMethod { BerezinShell, FiniteSection, LimitOperatorUnion };
std::string to_string(SpectrumMethod m);

struct SpectrumEstimate {
  SpectrumMethod method = SpectrumMethod::BerezinShell;
  std::vector<cplx> points;
  std::vector<Point> samples;  // shell points (BerezinShell only)
  double t_min = 0.0, t_max = 0.0;
  int grid = 0;
  int degree = 0;
  std::string caveat;
};

/// Shell points: max(2, grid/8) radii spaced evenly over [t_min, t_max] times `grid` angles
/// (directions on the balls and the matrix ball).
std::vector<Point> shell_points(const Domain& dom, double t_min, double t_max, int grid);

/// B(A)(z) over shell_points. The caveat notes when A is not known to have a VMO symbol.
SpectrumEstimate essential_spectrum_berezin(const OperatorMatrix& a, double t_min, double t_max, int grid);

/// Estimates for the shells [t, t_max], t in t_mins, all on the radial grid of the widest
/// shell, so that each inner shell samples a subset of the outer one.
std::vector<SpectrumEstimate> nested_shells(const OperatorMatrix& a, const std::vector<double>& t_mins, double t_max,
                                            int grid);

/// Eigenvalues of the truncated matrix.
SpectrumEstimate finite_section_spectrum(const OperatorMatrix& a);

/// Union of the spectra of the approximants A_{z_m}.
SpectrumEstimate limit_operator_spectrum(const OperatorMatrix& a, const std::vector<BoundarySequence>& seqs, int m);

/// Hausdorff distance between finite sets.
double hausdorff(const std::vector<cplx>& a, const std::vector<cplx>& b);
/// sup_{x in a} dist(x, b).
double excess(const std::vector<cplx>& a, const std::vector<cplx>& b);
/// Hausdorff distance from a finite set to the circle |w - center| = radius.
double hausdorff_to_circle(const std::vector<cplx>& a, cplx center, double radius);
double diameter(const std::vector<cplx>& a);

struct EssentialNormBounds {
  double lower = 0.0;
  double upper = 0.0;
  double proxy = 0.0;       // max over sequences of |A_{z_m}|
  double tail_proxy = 0.0;  // |Pi A Pi| over the upper half of the degrees
  std::vector<double> per_sequence;
  std::string caveat;
};

/// At p = 2 the norm of P_nu is 1, so lower = upper = proxy. Other p use the same numbers
/// as a surrogate and say so in the caveat. Throws InvalidArgument without sequences.
EssentialNormBounds essential_norm_bounds(const OperatorMatrix& a, const std::vector<BoundarySequence>& seqs, int m);

struct Thresholds {
  double berezin_decay = 2e-2;
  double approximant = 2e-2;
  double sigma_min = 1e-2;
  double robust_factor = 5.0;  // a check fails robustly when off by more than this factor
  double vo_oscillation = 0.05;
  double band_ratio = 0.1;
};

enum class Verdict { CompactConsistent, NotCompact, InvertibleConsistent, NotInvertible, Inconclusive };
std::string to_string(Verdict v);

struct CheckOutcome {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool passed = false;
  bool robust_failure = false;
  std::string detail;
};

struct CompactnessReport {
  Verdict verdict = Verdict::Inconclusive;
  std::vector<CheckOutcome> checks;  // berezin_shell, limit_approximants, band_profile
  SpectrumEstimate shell;
  std::vector<double> approximant_norms;
};

/// (a) max |B(A)| on the shell, (b) max |A_{z_m}| over the sequences and (c) the band
/// profile: Toeplitz-algebra elements are band-dominated by construction, other matrices
/// are profiled on the Nystrom grid. Errors in a check count as inconclusive.
CompactnessReport compactness_test(const OperatorMatrix& a, const std::vector<BoundarySequence>& seqs, int m,
                                   double t_min, double t_max, int grid, const Thresholds& th = {});

struct OscillationEntry {
  Point z;
  double osc = 0.0;
  double mo = 0.0;
};

struct OscillationReport {
  std::vector<OscillationEntry> entries;
  double slope = 0.0;  // least-squares slope of Osc against beta(0, z)
  bool vo_certified = false;
  std::string detail;
};

/// Osc_z(f) = max |f(z) - f(w)| over w = phi_z(u), |u| <= tanh(1/sqrt g) sampled on
/// 8 radii x 32 angles; MO(f)(z) = B(|f - B f(z)|^2)(z). Points z = r u for r in radii.
/// VO is certified iff Osc does not increase along the radii and its last value is at most
/// th.vo_oscillation.
OscillationReport oscillation_report(const Domain& dom, double nu, const Symbol& f, const std::vector<double>& radii,
                                     const Point& direction, const Thresholds& th = {});
/// The same for the Berezin transform of A.
OscillationReport oscillation_report(const OperatorMatrix& a, const std::vector<double>& radii,
                                     const Point& direction, const Thresholds& th = {});

/// Radii 0.5, 0.6, 0.7, 0.8, 0.9, 0.95, 0.99.
std::vector<double> default_oscillation_radii();

struct SequenceDiagnostic {
  std::string label;
  Point z;
  std::vector<double> sigma_min;  // at steps m-2, m-1, m
  double scalar_deviation = 0.0;  // |A_{z_m} - B(A)(z_m) I|
};

struct FredholmReport {
  Verdict verdict = Verdict::Inconclusive;
  cplx lambda = 0.0;
  std::vector<SequenceDiagnostic> sequences;
  double min_sigma = 0.0;
  std::optional<bool> vo_certified;
  std::string caveat;
};

/// sigma_min(A_{z_k} - lambda I) on the tail k = m-2..m of each sequence. Invertible-consistent
/// iff the minimum at m is at least th.sigma_min and no tail decreases; not invertible iff
/// some sequence ends below th.sigma_min.
FredholmReport fredholm_test(const OperatorMatrix& a, const std::vector<BoundarySequence>& seqs, int m, cplx lambda,
                             const Thresholds& th = {});

/// |A_{z_m} - B(A)(z_m) I|.
double scalar_deviation(const OperatorMatrix& a, const BoundarySequence& seq, int m);

}  // namespace bl
