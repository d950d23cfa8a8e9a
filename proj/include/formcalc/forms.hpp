#pragma once

// Skew-symmetric differential forms on a flat coordinate space.

#include <compare>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "formcalc/expr.hpp"

namespace formcalc {

/// Strictly increasing list of 0-based coordinate indices; the empty list is
/// the degree-0 index.
class MultiIndex {
 public:
  MultiIndex() = default;
  /// Throws InvalidArgument unless strictly increasing and non-negative.
  explicit MultiIndex(std::vector<int> indices);

  std::span<const int> indices() const { return idx_; }
  int size() const { return static_cast<int>(idx_.size()); }
  int operator[](int i) const { return idx_[static_cast<std::size_t>(i)]; }
  bool contains(int i) const;

  auto operator<=>(const MultiIndex&) const = default;
  bool operator==(const MultiIndex&) const = default;

 private:
  std::vector<int> idx_;
};

/// Sorts `indices` into canonical order. Returns the permutation sign, or
/// 0 when an index repeats (the wedge product annihilates the term).
std::pair<int, MultiIndex> canonical_index(std::vector<int> indices);

using Coords = std::vector<std::string>;

/// x1, ..., xn (or another prefix).
Coords default_coords(int n, const std::string& prefix = "x");

class Form {
 public:
  using Terms = std::map<MultiIndex, Expr>;
  using RawTerm = std::pair<std::vector<int>, Expr>;

  /// The zero form of the given degree.
  Form(Coords coords, int degree);

  /// Sums the raw terms after sorting each index list (with its sign) and
  /// simplifying coefficients; zero coefficients are pruned.
  static Form from_terms(Coords coords, int degree, std::vector<RawTerm> terms);
  static Form scalar(Coords coords, const Expr& f);
  /// coefficient * dx^{i1} ^ ... ^ dx^{ip} for 0-based indices in any order.
  static Form basis(Coords coords, std::vector<int> indices,
                    const Expr& coefficient = Expr(1L));

  int degree() const { return degree_; }
  int dim() const { return static_cast<int>(coords_.size()); }
  const Coords& coords() const { return coords_; }
  const Terms& terms() const { return terms_; }
  Expr coefficient(const MultiIndex& index) const;
  bool is_zero() const { return terms_.empty(); }

  /// Applies `f` to each coefficient and renormalizes.
  Form map_coefficients(const std::function<Expr(const Expr&)>& f) const;

  /// "(c1) dx1^dx2 + (c2) dx1^dx3"; the zero form keeps a basis so that
  /// reparsing recovers the degree.
  std::string str() const;

  friend bool operator==(const Form& a, const Form& b);

 private:
  Coords coords_;
  int degree_;
  Terms terms_;
};

std::ostream& operator<<(std::ostream& os, const Form& f);

Form wedge(const Form& a, const Form& b);
Form add(const Form& a, const Form& b);
Form subtract(const Form& a, const Form& b);
Form scale(const Form& a, const Expr& c);
Form negate(const Form& a);

/// Exterior derivative on the flat coordinate space.
Form d_flat(const Form& a);

/// Zero test over every coefficient of d_flat(a).
ZeroTest is_closed_flat(const Form& a, const ProbeOptions& options = {});

/// Zero test over every coefficient of `a`.
ZeroTest is_zero_form(const Form& a, const ProbeOptions& options = {});

/// Throws DimensionMismatch unless both forms share the coordinate list.
void require_same_space(const Form& a, const Form& b);

}  // namespace formcalc
