#pragma once

#include <optional>
#include <vector>

#include "formcalc/expr.hpp"
#include "formcalc/linalg.hpp"

namespace formcalc {

enum class Signature { Euclidean, Lorentzian };

/// Symmetric nondegenerate metric g_ij with its inverse and volume factor
/// sqrt|det g| precomputed.
///
/// Lorentzian signature is accepted only for diagonal constant metrics with
/// exactly one negative entry. Other metrics must have det g > 0 at a probe
/// point; their volume factor must be an exact square root in the
/// expression class, otherwise `volume_factor()` throws UnsupportedClass.
class Metric {
 public:
  /// Throws InvalidArgument (asymmetric, unsupported signature) or
  /// DegenerateMetric.
  explicit Metric(ExprMatrix g);
  static Metric euclidean(int n);
  static Metric diagonal(const std::vector<Expr>& entries);

  int dim() const { return g_.size(); }
  const ExprMatrix& g() const { return g_; }
  const ExprMatrix& inverse() const { return inverse_; }
  const Expr& determinant() const { return det_; }
  /// +1 or -1.
  int det_sign() const { return det_sign_; }
  Signature signature() const { return signature_; }
  bool is_diagonal_constant() const { return diagonal_constant_; }
  const Expr& volume_factor() const;

 private:
  ExprMatrix g_;
  ExprMatrix inverse_;
  Expr det_;
  int det_sign_ = 1;
  Signature signature_ = Signature::Euclidean;
  bool diagonal_constant_ = false;
  std::optional<Expr> volume_;
};

}  // namespace formcalc
