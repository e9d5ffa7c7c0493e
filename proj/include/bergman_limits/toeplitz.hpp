#pragma once

// Toeplitz operators T_f = P_nu M_f on truncated bases, Toeplitz-algebra elements, their
// shifts U_z^p A U_z^p, and Berezin transforms evaluated at function level.

#include "bergman_limits/bergman_core.hpp"

namespace bl {

/// Matrix <f e_k, e_l> with `rule` (default: the basis rule). Constant symbols give c I exactly.
OperatorMatrix assemble_toeplitz(const BasisPtr& basis, const Symbol& f, const QuadratureRule* rule = nullptr);

/// sum_t coeff_t T_{f_t1} T_{f_t2} ... ; an empty word is the identity.
OperatorMatrix toeplitz_algebra_element(const BasisPtr& basis, const ToeplitzWords& words);

/// Rule suited to integrands f o phi_z against degree-`degree` polynomials: graded toward
/// z/|z| on the disk once |z| > 1/2, the default rule otherwise.
QuadratureRule shifted_rule(const Domain& dom, double nu, const Point& z, int degree);

/// U_z^p T_f U_z^p = T_{b_z}^{-1} T_{(f o phi_z) b_z} assembled directly (p = 2: T_{f o phi_z}).
OperatorMatrix shifted_toeplitz(const BasisPtr& basis, const Symbol& f, const Point& z);

/// U_z^p A U_z^p. Toeplitz-algebra elements are shifted factor by factor at function level;
/// other matrices are conjugated by the truncated shift and carry its spill.
OperatorMatrix shifted_operator(const OperatorMatrix& a, const Point& z);

struct ShiftCheck {
  double residual = 0.0;
  double spill = 0.0;  // largest column spill of the padded shift blocks
  int padded_degree = 0;
};

/// |Pi_d T_b (U T_f U) Pi_d - Pi_d T_{(f o phi_z) b} Pi_d|_2 with U T_f U built through
/// padded truncations (degree grown until the shift spill is below 1e-7, at most 160 on the disk).
ShiftCheck shifted_toeplitz_check(const BasisPtr& basis, const Symbol& f, const Point& z);

/// Berezin transform int f o phi_z dv_nu of the symbol (equal to B(T_f)(z) for every p).
cplx berezin_symbol(const Domain& dom, double nu, const Symbol& f, const Point& z);

/// B(A)(z). Toeplitz-algebra elements are evaluated at function level; products of two or
/// more factors go through padded truncations and throw Accuracy when those disagree.
/// Plain matrices use the kernel expansion (see berezin_matrix).
cplx berezin(const OperatorMatrix& a, const Point& z);

/// Largest singular value.
double spectral_norm(const Eigen::MatrixXcd& m);
/// Smallest singular value.
double min_singular_value(const Eigen::MatrixXcd& m);

}  // namespace bl
