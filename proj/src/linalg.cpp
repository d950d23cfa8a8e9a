#include "formcalc/linalg.hpp"

#include <functional>
#include <unordered_map>

#include "formcalc/error.hpp"
#include "formcalc/poly.hpp"

namespace formcalc {

ExprMatrix::ExprMatrix(int n, std::vector<Expr> entries)
    : n_(n), entries_(std::move(entries)) {
  if (n < 0 || entries_.size() != static_cast<std::size_t>(n * n))
    throw DimensionMismatch("matrix entries do not form an n x n table");
}

ExprMatrix ExprMatrix::identity(int n) {
  std::vector<Expr> e(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n; ++i) e[static_cast<std::size_t>(i * n + i)] = Expr(1L);
  return ExprMatrix(n, std::move(e));
}

ExprMatrix ExprMatrix::minor(const std::vector<int>& rows,
                             const std::vector<int>& cols) const {
  if (rows.size() != cols.size())
    throw DimensionMismatch("minor must be square");
  std::vector<Expr> e;
  e.reserve(rows.size() * cols.size());
  for (int r : rows) {
    for (int c : cols) e.push_back((*this)(r, c));
  }
  return ExprMatrix(static_cast<int>(rows.size()), std::move(e));
}

namespace {

alg::RatFunc det_rf(const std::vector<alg::RatFunc>& a, int n) {
  if (n == 0) return alg::RatFunc(alg::Polynomial::constant(1));
  // memo[mask] = determinant of rows (n - popcount(mask))..n-1 restricted to
  // the columns in `mask`.
  std::unordered_map<unsigned, alg::RatFunc> memo;
  const unsigned full = (1U << n) - 1U;
  std::function<alg::RatFunc(unsigned)> rec = [&](unsigned mask) -> alg::RatFunc {
    if (mask == 0) return alg::RatFunc(alg::Polynomial::constant(1));
    if (auto it = memo.find(mask); it != memo.end()) return it->second;
    const int row = n - __builtin_popcount(mask);
    alg::RatFunc acc;
    int sign = 1;
    for (int c = 0; c < n; ++c) {
      if ((mask & (1U << c)) == 0) continue;
      const auto& entry = a[static_cast<std::size_t>(row * n + c)];
      if (!entry.is_zero()) {
        alg::RatFunc t = entry * rec(mask & ~(1U << c));
        acc = sign > 0 ? acc + t : acc - t;
      }
      sign = -sign;
    }
    memo.emplace(mask, acc);
    return acc;
  };
  return rec(full);
}

}  // namespace

Expr determinant(const ExprMatrix& m) {
  std::vector<alg::RatFunc> a;
  a.reserve(m.entries().size());
  for (const auto& e : m.entries()) a.push_back(alg::to_ratfunc(e));
  return det_rf(a, m.size()).to_expr();
}

ExprMatrix inverse(const ExprMatrix& m) {
  const int n = m.size();
  const Expr det = determinant(m);
  if (det.is_literal_zero()) throw DivisionByZero("singular matrix");
  std::vector<Expr> inv(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      std::vector<int> rows, cols;
      for (int r = 0; r < n; ++r) {
        if (r != j) rows.push_back(r);
      }
      for (int c = 0; c < n; ++c) {
        if (c != i) cols.push_back(c);
      }
      const Expr cof = determinant(m.minor(rows, cols));
      const Expr signed_cof = ((i + j) % 2 == 0) ? cof : -cof;
      inv[static_cast<std::size_t>(i * n + j)] = simplify(signed_cof / det);
    }
  }
  return ExprMatrix(n, std::move(inv));
}

}  // namespace formcalc
