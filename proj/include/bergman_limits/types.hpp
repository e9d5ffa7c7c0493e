#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>

namespace bl {

using cplx = std::complex<double>;

/// Largest complex dimension handled by the implemented domains
/// (UnitBall(n) for n <= 4, and the 2x2 matrix ball flattened row-major).
inline constexpr int kMaxDim = 4;

/// Error categories. The numeric values are part of the C API.
enum class ErrorCode : int {
  InvalidArgument = 1,
  Parse = 2,
  NotAdmissible = 3,
  Accuracy = 4,
  OutsideDomain = 5,
  DimensionMismatch = 6,
  Internal = 7,
  VerifyFailed = 8,
  Io = 9,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// A point of C^n, n <= kMaxDim. Matrix-ball points store Z row-major:
/// (z11, z12, z21, z22).
struct Point {
  std::array<cplx, kMaxDim> c{};
  int n = 0;

  Point() = default;
  explicit Point(int dim) : n(dim) {}
  Point(std::initializer_list<cplx> values) : n(static_cast<int>(values.size())) {
    if (n > kMaxDim) throw Error(ErrorCode::DimensionMismatch, "point dimension exceeds kMaxDim");
    int i = 0;
    for (const auto& v : values) c[i++] = v;
  }

  int size() const { return n; }
  cplx& operator[](int i) { return c[i]; }
  const cplx& operator[](int i) const { return c[i]; }

  double norm2() const {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += std::norm(c[i]);
    return s;
  }
  bool finite() const {
    for (int i = 0; i < n; ++i)
      if (!std::isfinite(c[i].real()) || !std::isfinite(c[i].imag())) return false;
    return true;
  }
  Point scaled(cplx s) const {
    Point out(n);
    for (int i = 0; i < n; ++i) out.c[i] = s * c[i];
    return out;
  }
};

}  // namespace bl
