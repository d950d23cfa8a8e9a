#pragma once

// Pseudostructures as parametrized immersions t -> x(t), restriction of
// forms to them, and the functional expressions whose vanishing marks a
// degenerate transformation.

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "formcalc/forms.hpp"
#include "formcalc/manifold.hpp"

namespace formcalc {

class Pseudostructure {
 public:
  /// `map[i]` gives ambient coordinate `ambient[i]` as an expression in the
  /// parameters. Other free names in the map are symbolic constants; ambient
  /// coordinates that are not also parameters may not appear.
  /// Throws DimensionMismatch when the map length differs from the ambient
  /// dimension or k > n, and InvalidArgument when the Jacobian does not reach
  /// rank k at any probe point.
  Pseudostructure(Coords params, Coords ambient, std::vector<Expr> map,
                  const ProbeOptions& options = {});

  /// x_i = x_i on the given coordinates.
  static Pseudostructure identity(const Coords& coords);

  const Coords& params() const { return params_; }
  const Coords& ambient() const { return ambient_; }
  const std::vector<Expr>& map() const { return map_; }
  int dim() const { return static_cast<int>(params_.size()); }
  int ambient_dim() const { return static_cast<int>(ambient_.size()); }

  /// d x_i / d t_j, row-major n x k.
  const Expr& jacobian(int i, int j) const {
    return jacobian_[static_cast<std::size_t>(i * dim() + j)];
  }

 private:
  Pseudostructure(Coords params, Coords ambient, std::vector<Expr> map, bool);
  Coords params_;
  Coords ambient_;
  std::vector<Expr> map_;
  std::vector<Expr> jacobian_;
};

/// Substitutes x_i -> phi_i in the coefficients and dx_i -> sum_j
/// (d phi_i / d t_j) dt_j. Throws DimensionMismatch.
Form pullback(const Pseudostructure& pi, const Form& theta);

/// d_flat(pullback(pi, theta)).
Form d_pi(const Pseudostructure& pi, const Form& theta);

ZeroTest is_closed_on(const Pseudostructure& pi, const Form& theta,
                      const ProbeOptions& options = {});

struct DualClosure {
  ZeroTest form;  // closure of theta on pi
  ZeroTest dual;  // closure of *theta on pi
  bool holds() const { return form == ZeroTest::Zero && dual == ZeroTest::Zero; }
};

/// Both closure conditions; `m` supplies the metric for the dual form.
DualClosure defines_pseudostructure(const Manifold& m, const Pseudostructure& pi,
                                    const Form& theta, const ProbeOptions& options = {});

/// det(d map_i / d inputs_j), simplified. Throws DimensionMismatch unless
/// square.
Expr jacobian_determinant(const std::vector<Expr>& map, const Coords& inputs);

/// sum_i (df/dq_i dg/dp_i - df/dp_i dg/dq_i). Throws InvalidArgument on an
/// empty or repeated name.
Expr poisson_bracket(const Expr& f, const Expr& g,
                     const std::vector<std::pair<std::string, std::string>>& pairs);

struct LocusFactor {
  Expr factor;
  int multiplicity;
};

struct DegeneracyReport {
  Expr expression;
  /// True when the locus is the exact zero set of the listed factors.
  bool exact = false;
  /// Constant c with expression = c * prod(factor^multiplicity) (exact case).
  Rational unit = 1;
  std::vector<LocusFactor> factors;
  /// Numerically located zeros (non-polynomial case only).
  std::vector<std::map<std::string, double>> sample_zeros;
  std::string note;
};

/// Polynomial (or rational) input: factors of the numerator. Otherwise zeros
/// found by bisection along random lines through the probe box, labelled as
/// probe results.
DegeneracyReport degenerate_locus(const Expr& e, const ProbeOptions& options = {});

struct ClosureCase {
  Pseudostructure pi;
  Form theta;
};

struct ClosureOutcome {
  ZeroTest result = ZeroTest::NonZero;
  std::string error;  // empty unless the case threw
};

/// Closure of every case on its pseudostructure, one task per case.
std::vector<ClosureOutcome> closure_batch(const std::vector<ClosureCase>& cases,
                                          const ProbeOptions& options = {});

/// Reference implementation of `closure_batch` on one thread.
std::vector<ClosureOutcome> closure_batch_serial(const std::vector<ClosureCase>& cases,
                                                 const ProbeOptions& options = {});

}  // namespace formcalc
