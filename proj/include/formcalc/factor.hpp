#pragma once

// Partial factorization of polynomials whose kernels are all variables.

#include <map>
#include <string>
#include <vector>

#include "formcalc/poly.hpp"

namespace formcalc::alg {

struct Factor {
  Polynomial poly;  // primitive, integer coefficients, positive leading term
  int multiplicity;
};

/// p = unit * prod(f.poly ^ f.multiplicity).
struct Factorization {
  Rational unit;
  std::vector<Factor> factors;
};

/// Every affine-linear factor with rational coefficients is split off with
/// its multiplicity; the nonlinear cofactor is then decomposed into
/// square-free parts, which are not split further.
/// Throws UnsupportedClass if `p` has a function kernel or is zero.
Factorization factor(const Polynomial& p);

/// Substitutes rational values for the named variable kernels.
Polynomial evaluate(const Polynomial& p, const std::map<std::string, Rational>& values);

/// Rational roots of a polynomial in the single variable `var`, ascending.
/// Roots are searched only when the extreme coefficients are small enough
/// for divisor enumeration.
std::vector<Rational> rational_roots(const Polynomial& p, const Expr& var);

}  // namespace formcalc::alg
