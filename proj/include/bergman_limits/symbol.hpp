#pragma once

// Bounded symbols f : Omega -> C and the small expression language used to define them.
//
// Grammar (whitespace ignored):
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := ('-' | '+') unary | power
//   power   := primary ('^' unary)?
//   primary := number | 'i' | 'pi' | variable | name '(' expr ')' | '(' expr ')' | '|' expr '|'
// Variables: z (first coordinate), z1..z4, and for the matrix ball also z11 z12 z21 z22;
// r2 is the squared Euclidean norm sum |z_i|^2.
// Functions: conj abs abs2 re im exp sin cos tanh sqrt log.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bergman_limits/symdomain.hpp"

namespace bl {

enum class SymbolKind { Constant, Polynomial, Radial, Indicator, Callable };

/// One term c * z^a * conj(z)^b of a polynomial in z and conj(z).
struct PolyTerm {
  cplx coeff;
  std::array<int, kMaxDim> a{};
  std::array<int, kMaxDim> b{};
};

class Symbol {
 public:
  /// The zero symbol.
  Symbol();

  static Symbol constant(cplx c);
  static Symbol polynomial(std::string label, std::vector<PolyTerm> terms);
  /// f(z) = profile(|z|^2).
  static Symbol radial(std::string label, std::function<double(double)> profile, double bound);
  /// Characteristic function of {pred(z)}.
  static Symbol indicator(std::string label, std::function<bool(const Point&)> pred);
  static Symbol callable(std::string label, std::function<cplx(const Point&)> fn, double bound);

  cplx operator()(const Point& z) const { return fn_(z); }

  SymbolKind kind() const { return kind_; }
  const std::string& label() const { return label_; }
  /// Sup-norm estimate (exact for constants and indicators, sampled otherwise).
  double bound() const { return bound_; }
  bool is_constant() const { return kind_ == SymbolKind::Constant; }
  cplx constant_value() const { return constant_; }
  const std::vector<PolyTerm>& terms() const { return terms_; }

  /// Bounded uniformly continuous in the Bergman metric, when known.
  std::optional<bool> buc;
  /// Vanishing oscillation at the boundary, when known.
  std::optional<bool> vo;
  /// Where the symbol varies fastest: set by composed(), read by quadrature that needs grading.
  std::optional<Point> focus;

  Symbol conj() const;
  Symbol operator*(const Symbol& o) const;
  Symbol operator+(const Symbol& o) const;
  Symbol scaled(cplx c) const;
  /// f o phi_z.
  Symbol composed(const Domain& dom, const Point& z) const;

 private:
  SymbolKind kind_ = SymbolKind::Callable;
  std::string label_;
  double bound_ = 0.0;
  cplx constant_ = 0.0;
  std::vector<PolyTerm> terms_;
  std::function<cplx(const Point&)> fn_;
};

/// Parses `expr` for points of `dom`. Throws Error(Parse) with the offending position.
Symbol parse_symbol(const std::string& expr, const Domain& dom);

/// Largest |f| over a deterministic sample of the domain (interior grid plus a shell at 0.999).
double sample_bound(const Domain& dom, const std::function<cplx(const Point&)>& f);

}  // namespace bl
