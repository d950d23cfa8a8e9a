#pragma once

#include <vector>

#include "formcalc/expr.hpp"

namespace formcalc {

/// Dense square matrix of expressions, row-major.
class ExprMatrix {
 public:
  ExprMatrix(int n, std::vector<Expr> entries);
  static ExprMatrix identity(int n);

  int size() const { return n_; }
  const Expr& operator()(int i, int j) const {
    return entries_[static_cast<std::size_t>(i * n_ + j)];
  }
  const std::vector<Expr>& entries() const { return entries_; }

  /// Submatrix on the given rows and columns.
  ExprMatrix minor(const std::vector<int>& rows,
                   const std::vector<int>& cols) const;

 private:
  int n_;
  std::vector<Expr> entries_;
};

/// Exact determinant (Laplace expansion memoized over column subsets).
Expr determinant(const ExprMatrix& m);

/// Inverse via the adjugate; throws DivisionByZero
/// when the determinant simplifies to 0.
ExprMatrix inverse(const ExprMatrix& m);

}  // namespace formcalc
