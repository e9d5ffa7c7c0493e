#include "bergman_limits/symdomain.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

#include "bergman_limits/gauss.hpp"

namespace bl {
namespace {

using Mat2 = Eigen::Matrix2cd;

Mat2 to_mat(const Point& z) {
  Mat2 m;
  m << z[0], z[1], z[2], z[3];
  return m;
}

Point from_mat(const Mat2& m) { return Point{m(0, 0), m(0, 1), m(1, 0), m(1, 1)}; }

// Square root of a 2x2 Hermitian positive definite matrix:
// sqrt(A) = (A + sqrt(det A) I) / sqrt(tr A + 2 sqrt(det A)).
Mat2 sqrt_hpd(const Mat2& a) {
  const double s = std::sqrt(std::max(0.0, a.determinant().real()));
  const double tau = std::sqrt(a.trace().real() + 2.0 * s);
  return (a + s * Mat2::Identity()) / tau;
}

cplx inner(const Point& z, const Point& w) {
  cplx s = 0.0;
  for (int i = 0; i < z.n; ++i) s += z[i] * std::conj(w[i]);
  return s;
}

cplx log_factor(cplx x, BranchPolicy policy) {
  if (x == cplx(0.0)) throw Error(ErrorCode::OutsideDomain, "h(z,w) vanishes");
  if (x.imag() == 0.0 && x.real() < 0.0)
    throw Error(ErrorCode::OutsideDomain, "h(z,w) has no continuous branch here");
  double arg = std::arg(x);
  if (policy == BranchPolicy::CorruptedForTesting && arg < 0.0) arg += 2.0 * M_PI;
  return {std::log(std::abs(x)), arg};
}

// Eigenvalues of the 2x2 matrix M, larger modulus first.
std::array<cplx, 2> eig2(const Mat2& m) {
  const cplx tr = m.trace();
  const cplx det = m.determinant();
  const cplx disc = std::sqrt(tr * tr - 4.0 * det);
  cplx mu1 = 0.5 * (tr + disc);
  cplx mu2 = 0.5 * (tr - disc);
  if (std::abs(mu2) > std::abs(mu1)) std::swap(mu1, mu2);
  if (std::abs(mu1) > 0.0) mu2 = det / mu1;
  return {mu1, mu2};
}

}  // namespace

Domain::Domain(DomainKind kind, int n, int r, int a, int b)
    : kind_(kind), n_(n), r_(r), a_(a), b_(b), g_(a * (r - 1) + b + 2) {}

Domain Domain::unit_disk() { return Domain(DomainKind::UnitDisk, 1, 1, 0, 0); }

Domain Domain::unit_ball(int n) {
  if (n < 1 || n > kMaxDim)
    throw Error(ErrorCode::InvalidArgument, "unit ball dimension must be in 1..4");
  if (n == 1) return unit_disk();
  return Domain(DomainKind::UnitBall, n, 1, 0, n - 1);
}

Domain Domain::matrix_ball() { return Domain(DomainKind::MatrixBall, 4, 2, 2, 0); }

std::string Domain::name() const {
  switch (kind_) {
    case DomainKind::UnitDisk:
      return "UnitDisk";
    case DomainKind::UnitBall:
      return "UnitBall(" + std::to_string(n_) + ")";
    case DomainKind::MatrixBall:
      return "MatrixBall(2,2)";
  }
  return "?";
}

void Domain::check_dim(const Point& z) const {
  if (z.n != n_)
    throw Error(ErrorCode::DimensionMismatch,
                "point of dimension " + std::to_string(z.n) + " given for " + name());
}

PolarData Domain::polar(const Point& z) const {
  check_dim(z);
  if (!z.finite()) throw Error(ErrorCode::InvalidArgument, "non-finite point");
  PolarData out;
  out.r = r_;
  if (kind_ != DomainKind::MatrixBall) {
    out.t[0] = std::sqrt(z.norm2());
    return out;
  }
  const double fro2 = z.norm2();
  const double adet = std::abs(z[0] * z[3] - z[1] * z[2]);
  // t1^2 + t2^2 = |Z|_F^2 and t1 t2 = |det Z|.
  const double disc = std::sqrt(std::max(0.0, fro2 * fro2 - 4.0 * adet * adet));
  const double t1 = std::sqrt(0.5 * (fro2 + disc));
  out.t[0] = t1;
  out.t[1] = t1 > 0.0 ? adet / t1 : 0.0;
  return out;
}

bool Domain::interior(const Point& z) const { return polar(z).max() < 1.0 - kBoundaryTolerance; }

bool Domain::in_closure(const Point& z, double slack) const { return polar(z).max() <= 1.0 + slack; }

cplx Domain::h(const Point& z, const Point& w) const {
  check_dim(z);
  check_dim(w);
  if (kind_ != DomainKind::MatrixBall) return 1.0 - inner(z, w);
  const Mat2 m = Mat2::Identity() - to_mat(z) * to_mat(w).adjoint();
  return m.determinant();
}

cplx Domain::log_h(const Point& z, const Point& w, BranchPolicy policy) const {
  check_dim(z);
  check_dim(w);
  if (kind_ != DomainKind::MatrixBall) return log_factor(1.0 - inner(z, w), policy);
  const auto mu = eig2(to_mat(z) * to_mat(w).adjoint());
  return log_factor(1.0 - mu[0], policy) + log_factor(1.0 - mu[1], policy);
}

cplx Domain::h_pow(const Point& z, const Point& w, double lambda, BranchPolicy policy) const {
  if (lambda == 0.0) return 1.0;
  return std::exp(lambda * log_h(z, w, policy));
}

Point Domain::phi(const Point& z, const Point& w) const {
  check_dim(z);
  check_dim(w);
  if (!interior(z) || !interior(w))
    throw Error(ErrorCode::OutsideDomain, "geodesic symmetry needs interior points");
  switch (kind_) {
    case DomainKind::UnitDisk: {
      Point out(1);
      out[0] = (z[0] - w[0]) / (1.0 - std::conj(z[0]) * w[0]);
      return out;
    }
    case DomainKind::UnitBall: {
      const double a2 = z.norm2();
      const cplx denom = 1.0 - inner(w, z);
      Point out(n_);
      if (a2 == 0.0) {
        for (int i = 0; i < n_; ++i) out[i] = -w[i] / denom;
        return out;
      }
      const double s = std::sqrt(1.0 - a2);
      const cplx c = inner(w, z) / a2;
      for (int i = 0; i < n_; ++i) {
        const cplx pw = c * z[i];
        out[i] = (z[i] - pw - s * (w[i] - pw)) / denom;
      }
      return out;
    }
    case DomainKind::MatrixBall: {
      const Mat2 zm = to_mat(z);
      const Mat2 wm = to_mat(w);
      const Mat2 id = Mat2::Identity();
      const Mat2 left = sqrt_hpd(id - zm * zm.adjoint()).inverse();
      const Mat2 right = sqrt_hpd(id - zm.adjoint() * zm);
      const Mat2 mid = (id - zm.adjoint() * wm).inverse();
      return from_mat(left * (zm - wm) * mid * right);
    }
  }
  throw Error(ErrorCode::Internal, "unknown domain kind");
}

double Domain::distance_from_origin(const Point& z) const {
  const PolarData pd = polar(z);
  if (pd.max() >= 1.0 - kBoundaryTolerance)
    throw Error(ErrorCode::OutsideDomain, "Bergman distance needs interior points");
  double s = 0.0;
  for (int j = 0; j < pd.r; ++j) {
    const double a = std::atanh(pd.t[j]);
    s += a * a;
  }
  return std::sqrt(static_cast<double>(g_) * s);
}

double Domain::distance(const Point& z, const Point& w) const {
  if (r_ != 1) return distance_from_origin(phi(z, w));
  // Rank one: |phi_z(w)|^2 = (|z-w|^2 + |<z,w>|^2 - |z|^2 |w|^2) / |1 - <w,z>|^2.
  check_dim(z);
  check_dim(w);
  double d2 = 0.0, z2 = 0.0, w2 = 0.0;
  cplx zw = 0.0;
  for (int i = 0; i < n_; ++i) {
    d2 += std::norm(z[i] - w[i]);
    z2 += std::norm(z[i]);
    w2 += std::norm(w[i]);
    zw += z[i] * std::conj(w[i]);
  }
  if (std::sqrt(z2) >= 1.0 - kBoundaryTolerance || std::sqrt(w2) >= 1.0 - kBoundaryTolerance)
    throw Error(ErrorCode::OutsideDomain, "Bergman distance needs interior points");
  const double num = std::max(0.0, d2 + std::norm(zw) - z2 * w2);
  const double t = std::sqrt(num / std::norm(1.0 - std::conj(zw)));
  if (t >= 1.0 - kBoundaryTolerance) throw Error(ErrorCode::OutsideDomain, "Bergman distance needs interior points");
  return std::sqrt(static_cast<double>(g_)) * std::atanh(t);
}

std::vector<cplx> Domain::metric_tensor(const Point& z, double step) const {
  check_dim(z);
  const double margin = 1.0 - polar(z).max();
  if (margin <= kBoundaryTolerance)
    throw Error(ErrorCode::OutsideDomain, "metric tensor needs an interior point");
  const double hstep = std::min(step, 0.25 * margin);
  auto f = [&](const Point& x) { return std::log(h(x, x).real()); };
  // Real coordinates: index 2i is Re z_i, 2i+1 is Im z_i.
  auto bump = [&](Point x, int k, double d) {
    x[k / 2] += (k % 2 == 0) ? cplx(d, 0.0) : cplx(0.0, d);
    return x;
  };
  auto d2 = [&](int k, int l) {
    const double pp = f(bump(bump(z, k, hstep), l, hstep));
    const double pm = f(bump(bump(z, k, hstep), l, -hstep));
    const double mp = f(bump(bump(z, k, -hstep), l, hstep));
    const double mm = f(bump(bump(z, k, -hstep), l, -hstep));
    return (pp - pm - mp + mm) / (4.0 * hstep * hstep);
  };
  std::vector<cplx> out(static_cast<size_t>(n_ * n_));
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) {
      // d_i dbar_j = (1/4)[(dx_i dx_j + dy_i dy_j) + i (dx_i dy_j - dy_i dx_j)]
      const double re = d2(2 * i, 2 * j) + d2(2 * i + 1, 2 * j + 1);
      const double im = d2(2 * i, 2 * j + 1) - d2(2 * i + 1, 2 * j);
      out[static_cast<size_t>(i * n_ + j)] = -static_cast<double>(g_) * 0.25 * cplx(re, im);
    }
  }
  return out;
}

double Domain::path_length(const std::vector<Point>& pts, int per_segment) const {
  const Rule1D& gl = gauss_legendre(per_segment, 0.0, 1.0);
  double total = 0.0;
  for (size_t k = 0; k + 1 < pts.size(); ++k) {
    const Point& p = pts[k];
    const Point& q = pts[k + 1];
    check_dim(p);
    check_dim(q);
    Point v(n_);
    for (int i = 0; i < n_; ++i) v[i] = q[i] - p[i];
    for (int m = 0; m < gl.size(); ++m) {
      Point x(n_);
      for (int i = 0; i < n_; ++i) x[i] = p[i] + gl.x[m] * v[i];
      const auto g = metric_tensor(x);
      cplx s = 0.0;
      for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) s += g[static_cast<size_t>(i * n_ + j)] * v[i] * std::conj(v[j]);
      total += gl.w[m] * std::sqrt(std::max(0.0, s.real()));
    }
  }
  return total;
}

bool check_admissible(const Domain& dom, double alpha, double nu, double p) {
  if (!std::isfinite(p) || !std::isfinite(nu) || !std::isfinite(alpha)) return false;
  if (p <= 1.0 || nu <= -1.0) return false;
  const double ra = 0.5 * (dom.rank() - 1) * dom.a();
  const double mid = nu + 1.0 + ra;
  return p * (alpha + 1.0) > mid && mid > p * ra;
}

}  // namespace bl
