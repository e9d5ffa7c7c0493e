#pragma once

// One-dimensional Gauss rules (backed by GSL's fixed-order quadrature).
// Rules are cached; the returned references stay valid for the process.

#include <vector>

namespace bl {

struct Rule1D {
  std::vector<double> x;
  std::vector<double> w;
  int size() const { return static_cast<int>(x.size()); }
};

/// Gauss-Jacobi on [a,b] for the weight (b-x)^alpha (x-a)^beta.
const Rule1D& gauss_jacobi(int n, double a, double b, double alpha, double beta);
/// Gauss-Legendre on [a,b].
const Rule1D& gauss_legendre(int n, double a, double b);

}  // namespace bl
