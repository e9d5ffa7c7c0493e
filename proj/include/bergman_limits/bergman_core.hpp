#pragma once

// Truncated weighted Bergman spaces: orthonormal polynomial bases, reproducing kernels,
// the shift isometries U_z^p, the unimodular symbols b_z and the Berezin transform of
// matrices.

#include <Eigen/Dense>

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "bergman_limits/quadrature.hpp"
#include "bergman_limits/symbol.hpp"

namespace bl {

struct MultiIndex {
  std::array<int, kMaxDim> e{};
  int degree = 0;
};

/// Multi-indices of total degree <= max_degree in n variables, graded-lex order.
std::vector<MultiIndex> graded_lex(int n, int max_degree);

/// Orthonormal basis of the polynomials of degree <= max_degree in L^2(dv_nu).
/// On the disk and the balls the normalized monomials z^k/|z^k| are orthonormal; on the
/// matrix ball monomials of equal degree are not, and each degree block is orthonormalized
/// by Cholesky (degree blocks stay mutually orthogonal).
class Basis {
 public:
  /// Throws NotAdmissible when (nu, nu, p) is not admissible.
  static std::shared_ptr<const Basis> build(const Domain& dom, const WeightContext& ctx, int max_degree);

  const Domain& domain() const { return dom_; }
  const WeightContext& ctx() const { return ctx_; }
  int max_degree() const { return max_degree_; }
  int size() const { return static_cast<int>(idx_.size()); }
  const std::vector<MultiIndex>& indices() const { return idx_; }
  /// Monomial norms |z^k| in L^2(dv_nu), by quadrature.
  const std::vector<double>& norms() const { return norms_; }
  /// Largest deviation of the Gram matrix of the basis from the identity.
  double gram_error() const { return gram_error_; }
  bool monomials_orthogonal() const { return dom_.kind() != DomainKind::MatrixBall; }
  /// Number of basis functions of degree <= d.
  int count_upto(int d) const;
  /// Rule used for norms; exact for products of two basis polynomials.
  const QuadratureRule& rule() const { return rule_; }

  /// Values (e_0(x), ..., e_{N-1}(x)).
  Eigen::VectorXcd eval(const Point& x) const;
  /// Row i holds eval(pts[i]).
  Eigen::MatrixXcd eval_rows(const std::vector<Point>& pts) const;
  /// Coordinates <f, e_j> by quadrature with `rule` (defaults to rule()).
  Eigen::VectorXcd coords(const Integrand& f, const QuadratureRule* rule = nullptr) const;
  /// Evaluates sum_j c_j e_j(x).
  cplx combine(const Eigen::VectorXcd& c, const Point& x) const;

  /// Same domain and weight at another degree.
  std::shared_ptr<const Basis> with_degree(int d) const;

 private:
  Basis(const Domain& dom, const WeightContext& ctx, int max_degree);

  Domain dom_;
  WeightContext ctx_;
  int max_degree_;
  std::vector<MultiIndex> idx_;
  std::vector<double> norms_;
  // Column j: coefficients of e_j in the monomials. Diagonal 1/|z^k| when orthogonal.
  Eigen::MatrixXcd coef_;
  double gram_error_ = 0.0;
  QuadratureRule rule_;
};

using BasisPtr = std::shared_ptr<const Basis>;

/// Sum over terms of coeff * T_{f1} T_{f2} ... : the structure of a Toeplitz-algebra element.
struct ToeplitzWords {
  std::vector<cplx> coeff;
  std::vector<std::vector<Symbol>> words;
  std::string describe() const;
};

/// Operator on a truncated basis. `words` is set for Toeplitz-algebra elements, which lets
/// shifts and Berezin transforms be evaluated at function level instead of through the
/// truncation. `finite_rank` marks matrices that are the whole operator (zero off the span).
struct OperatorMatrix {
  Eigen::MatrixXcd m;
  BasisPtr basis;
  double p = 2.0;
  std::string label;
  double spill = 0.0;
  std::optional<ToeplitzWords> words;
  bool finite_rank = false;

  int size() const { return static_cast<int>(m.rows()); }
};

OperatorMatrix identity_operator(const BasisPtr& basis, double p);

/// Normalized reproducing kernel k_z^{(p)}(w) = h(z,z)^{(nu+g)/q} h(w,z)^{-(nu+g)}.
struct KernelFunction {
  Domain dom;
  Point z;
  double nu = 0.0;
  double p = 2.0;

  cplx operator()(const Point& w) const;
};

KernelFunction reproducing_kernel(const Domain& dom, const WeightContext& ctx, const Point& z, double pexp);

/// (P f)(z) = int f(w) h(z,w)^{-nu-g} dv_nu(w), nu = rule.nu. f is sampled once at the nodes.
Integrand projection_apply(const QuadratureRule& rule, const Integrand& f);

/// (U_z^p f)(w) = f(phi_z(w)) h(z,z)^{(nu+g)/p} / h(w,z)^{2(nu+g)/p}.
Integrand shift_function(const Domain& dom, double nu, const Point& z, double pexp, Integrand f);

/// (int |f|^p dv_nu)^{1/p} over the rule.
double p_norm(const QuadratureRule& rule, const Integrand& f, double p);

/// <U e_k, e_l> for e_k in `cols` and e_l in `rows` (same domain and weight).
struct ShiftBlock {
  Eigen::MatrixXcd m;
  std::vector<double> column_spill;  // |(I - Pi_rows) U e_k|
  double spill = 0.0;
};
ShiftBlock shift_isometry_block(const Basis& rows, const Basis& cols, const Point& z, double pexp);

/// Square truncation Pi U_z^p Pi with its spill recorded.
OperatorMatrix shift_isometry_matrix(const BasisPtr& basis, const Point& z, double pexp);

/// b_z(y) = h(z,y)^c / h(y,z)^c with c = (1/q - 1/p)(nu+g). Unimodular; identically 1 at p = 2.
Symbol bz_symbol(const Domain& dom, const WeightContext& ctx, const Point& z);

/// Expansion of k_z^{(2)} in the basis; `tail` is 1 - |coefficients|^2.
struct KernelExpansion {
  Eigen::VectorXcd c;
  double tail = 0.0;
};
KernelExpansion kernel_expansion(const Basis& basis, const Point& z);

/// Largest tolerated kernel-expansion tail.
inline constexpr double kKernelTailTolerance = 1e-6;

/// Berezin transform c^* A c of a matrix through the kernel expansion. Exact for
/// finite-rank matrices; otherwise throws Accuracy when the tail exceeds the tolerance.
cplx berezin_matrix(const OperatorMatrix& a, const Point& z);

}  // namespace bl
