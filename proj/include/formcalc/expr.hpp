#pragma once

// Exact symbolic scalar expressions.
//
// An Expr is an immutable tree over rational constants, named variables,
// n-ary sums and products, quotients, integer powers and the elementary
// functions sin, cos, exp, log. Trees built with the arithmetic operators
// are raw; `simplify` maps them to a canonical tree so that two
// mathematically equal polynomial/rational inputs produce identical trees.

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace formcalc {

using Rational = mpq_class;

enum class Func { Sin, Cos, Exp, Log };

std::string_view func_name(Func f);

class Expr {
 public:
  enum class Kind { Const, Var, Apply, Power, Product, Sum, Quotient };

  Expr();  // the constant 0
  Expr(long value);  // NOLINT(google-explicit-constructor)
  Expr(const Rational& value);  // NOLINT(google-explicit-constructor)

  static Expr constant(const Rational& value);
  static Expr var(std::string name);
  static Expr sum(std::vector<Expr> terms);
  static Expr product(std::vector<Expr> factors);
  static Expr quotient(Expr numerator, Expr denominator);
  static Expr power(Expr base, long exponent);
  static Expr apply(Func f, Expr argument);

  Kind kind() const;
  const Rational& value() const;         // Const
  const std::string& name() const;       // Var
  Func func() const;                     // Apply
  long exponent() const;                 // Power
  std::span<const Expr> children() const;

  bool is_const() const { return kind() == Kind::Const; }
  bool is_literal_zero() const;
  bool is_literal_one() const;
  bool has_function() const;

  /// Total structural order. Variables compare by natural name order, so
  /// x2 < x10.
  int compare(const Expr& other) const;

  std::string str() const;

  friend bool operator==(const Expr& a, const Expr& b) {
    return a.compare(b) == 0;
  }
  friend bool operator<(const Expr& a, const Expr& b) {
    return a.compare(b) < 0;
  }

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a);

  struct Node;  // opaque

 private:
  explicit Expr(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;
};

std::ostream& operator<<(std::ostream& os, const Expr& e);

Expr sin(const Expr& e);
Expr cos(const Expr& e);
Expr exp(const Expr& e);
Expr log(const Expr& e);
Expr pow(const Expr& base, long exponent);

/// Natural ordering on identifiers: digit runs compare numerically.
int natural_compare(std::string_view a, std::string_view b);

std::set<std::string> free_variables(const Expr& e);
bool depends_on(const Expr& e, std::string_view var);

/// Canonical form. Throws DivisionByZero on a literal zero divisor.
Expr simplify(const Expr& e);

/// d e / d var, simplified.
Expr differentiate(const Expr& e, std::string_view var);

using Bindings = std::map<std::string, Expr>;

/// Simultaneous substitution followed by simplification.
Expr substitute(const Expr& e, const Bindings& bindings);

/// Exact rational when the tree has no function nodes, double otherwise.
using Value = std::variant<Rational, double>;
using Point = std::map<std::string, Rational>;

Value eval_at(const Expr& e, const Point& point);
double to_double(const Value& v);

enum class ZeroTest { Zero, NonZero, ProbablyNonZero };
std::string_view to_string(ZeroTest z);

/// Combines per-component verdicts: any NonZero wins, then any
/// ProbablyNonZero, otherwise Zero.
ZeroTest combine(ZeroTest a, ZeroTest b);

struct ProbeOptions {
  std::uint64_t seed = 0x5eed'f0f0ULL;
  int points = 8;
  int max_attempts = 400;
};

ZeroTest is_zero(const Expr& e, const ProbeOptions& options = {});

/// simplify(a - b) is the literal 0.
bool equivalent(const Expr& a, const Expr& b);

/// Draws a rational in [-3, 3] with denominator at most 7.
template <class Rng>
Rational random_probe_rational(Rng& rng);

}  // namespace formcalc

#include "formcalc/detail/probe_rational.hpp"
