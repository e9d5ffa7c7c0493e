#pragma once

// Quadrature pairing of node-sampled functions against a basis.

#include <Eigen/Dense>

#include <functional>

#include "bergman_limits/bergman_core.hpp"

namespace bl {

/// Writes the values of `ncols` functions at a node.
using NodeValues = std::function<void(const Point&, cplx*)>;

struct Pairing {
  Eigen::MatrixXcd m;        // m(l, k) = sum_j w_j v_k(x_j) conj(e_l(x_j))
  Eigen::VectorXd col_norm2;  // sum_j w_j |v_k(x_j)|^2
};

Pairing pair_with_basis(const Basis& rows, const QuadratureRule& rule, int ncols, const NodeValues& values);

}  // namespace bl
