#pragma once

// Sparse multivariate polynomials and rational functions over "kernels".
// A kernel is a variable or a canonical elementary-function application;
// kernels are treated as independent indeterminates except for the
// Pythagorean relation cos(u)^2 = 1 - sin(u)^2, which is applied as a
// rewrite so that normal forms are unique modulo that relation.

#include <map>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "formcalc/expr.hpp"

namespace formcalc::alg {

/// Power product of kernels, sorted ascending by kernel order.
struct Monomial {
  std::vector<std::pair<Expr, int>> factors;

  bool is_one() const { return factors.empty(); }
  int total_degree() const;
  int degree_in(const Expr& kernel) const;
  Monomial without(const Expr& kernel) const;
};

Monomial operator*(const Monomial& a, const Monomial& b);
/// a / b when b divides a.
std::optional<Monomial> divide(const Monomial& a, const Monomial& b);

/// Lexicographic comparison; the smallest kernel is the most significant.
int lex_compare(const Monomial& a, const Monomial& b);

struct LexLess {
  bool operator()(const Monomial& a, const Monomial& b) const {
    return lex_compare(a, b) < 0;
  }
};

class Polynomial {
 public:
  using Terms = std::map<Monomial, Rational, LexLess>;

  Polynomial() = default;
  static Polynomial constant(const Rational& c);
  static Polynomial kernel(const Expr& k, int exponent = 1);
  static Polynomial term(const Rational& c, Monomial m);

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  Rational constant_value() const;  // requires is_constant()
  /// Lex-leading term; requires !is_zero().
  const std::pair<const Monomial, Rational>& leading() const;

  int degree_in(const Expr& kernel) const;
  int total_degree() const;
  std::vector<Expr> kernels() const;  // ascending
  bool has_function_kernel() const;

  /// View as a univariate polynomial in `kernel` with polynomial
  /// coefficients; absent degrees are omitted.
  std::map<int, Polynomial> coefficients_in(const Expr& kernel) const;
  Polynomial leading_coefficient_in(const Expr& kernel) const;

  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) {
    return a += b;
  }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) {
    return a -= b;
  }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a);
  Polynomial scaled(const Rational& c) const;
  Polynomial times(const Monomial& m) const;
  Polynomial pow(unsigned exponent) const;

  /// Scaled so the lex-leading coefficient is 1.
  Polynomial monic() const;

  friend bool operator==(const Polynomial& a, const Polynomial& b);

  /// Canonical tree: terms in graded-lex descending order.
  Expr to_expr() const;

  void add_term(const Rational& c, const Monomial& m);

 private:
  Terms terms_;
};

/// Exact quotient when `b` divides `a`, otherwise nullopt.
std::optional<Polynomial> divide_exact(const Polynomial& a,
                                       const Polynomial& b);

/// Monic greatest common divisor (1 when coprime, 0 when both are 0).
Polynomial gcd(const Polynomial& a, const Polynomial& b);

/// gcd of the coefficients of `p` viewed as polynomial in `kernel`.
Polynomial content_in(const Polynomial& p, const Expr& kernel);

/// Rewrites cos(u)^k, k >= 2, using cos(u)^2 = 1 - sin(u)^2.
Polynomial reduce_trig(const Polynomial& p);

/// Exact square root when `p` is a perfect square (sign fixed by a
/// positive lex-leading coefficient).
std::optional<Polynomial> sqrt_exact(const Polynomial& p);

/// Reduced quotient num/den with a monic denominator.
class RatFunc {
 public:
  RatFunc() : den_(Polynomial::constant(1)) {}
  RatFunc(Polynomial num);  // NOLINT(google-explicit-constructor)
  RatFunc(Polynomial num, Polynomial den);  // normalizes; throws on den = 0

  const Polynomial& num() const { return num_; }
  const Polynomial& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.is_constant(); }

  friend RatFunc operator+(const RatFunc& a, const RatFunc& b);
  friend RatFunc operator-(const RatFunc& a, const RatFunc& b);
  friend RatFunc operator*(const RatFunc& a, const RatFunc& b);
  friend RatFunc operator/(const RatFunc& a, const RatFunc& b);
  friend RatFunc operator-(const RatFunc& a);
  RatFunc pow(long exponent) const;

  friend bool operator==(const RatFunc& a, const RatFunc& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

  Expr to_expr() const;

 private:
  void normalize();
  Polynomial num_;
  Polynomial den_;
};

/// Canonicalizing conversion of a raw tree.
RatFunc to_ratfunc(const Expr& e);

/// Partial derivative with respect to the variable named `var`.
RatFunc derivative(const RatFunc& f, std::string_view var);
RatFunc derivative(const Polynomial& p, std::string_view var);

}  // namespace formcalc::alg
