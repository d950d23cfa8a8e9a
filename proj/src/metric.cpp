#include "formcalc/metric.hpp"

#include <random>

#include "formcalc/error.hpp"
#include "formcalc/poly.hpp"

namespace formcalc {
namespace {

ExprMatrix simplified(const ExprMatrix& g) {
  std::vector<Expr> e;
  e.reserve(g.entries().size());
  for (const auto& x : g.entries()) e.push_back(simplify(x));
  return ExprMatrix(g.size(), std::move(e));
}

int sign_at_probe(const Expr& det) {
  if (det.is_const()) return det.value() < 0 ? -1 : 1;
  std::mt19937_64 rng(0x6d657472ULL);
  const auto vars = free_variables(det);
  for (int attempt = 0; attempt < 200; ++attempt) {
    Point p;
    for (const auto& v : vars) p[v] = random_probe_rational(rng);
    try {
      const double v = to_double(eval_at(det, p));
      if (v != 0.0) return v < 0 ? -1 : 1;
    } catch (const Error&) {
    }
  }
  throw DegenerateMetric("metric determinant vanishes at every probe point");
}

std::optional<Expr> sqrt_of(const alg::RatFunc& r) {
  auto n = alg::sqrt_exact(r.num());
  auto d = alg::sqrt_exact(r.den());
  if (!n || !d) return std::nullopt;
  return alg::RatFunc(*n, *d).to_expr();
}

}  // namespace

Metric::Metric(ExprMatrix g)
    : g_(simplified(g)), inverse_(ExprMatrix::identity(g.size())) {
  const int n = g_.size();
  bool diagonal = true;
  bool constant = true;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i < j && !equivalent(g_(i, j), g_(j, i)))
        throw InvalidArgument("metric is not symmetric");
      if (i != j && !g_(i, j).is_literal_zero()) diagonal = false;
      if (!g_(i, j).is_const()) constant = false;
    }
  }
  det_ = formcalc::determinant(g_);
  if (is_zero(det_) == ZeroTest::Zero)
    throw DegenerateMetric("metric determinant is identically zero");
  diagonal_constant_ = diagonal && constant;

  if (diagonal_constant_) {
    int negatives = 0;
    for (int i = 0; i < n; ++i) negatives += g_(i, i).value() < 0 ? 1 : 0;
    if (negatives == 0) {
      signature_ = Signature::Euclidean;
    } else if (negatives == 1) {
      signature_ = Signature::Lorentzian;
    } else {
      throw InvalidArgument("only Euclidean and Lorentzian signatures are supported");
    }
    det_sign_ = negatives % 2 == 0 ? 1 : -1;
  } else {
    det_sign_ = sign_at_probe(det_);
    if (det_sign_ < 0)
      throw InvalidArgument(
          "indefinite metrics are supported only as diagonal constant tables");
    signature_ = Signature::Euclidean;
  }

  inverse_ = formcalc::inverse(g_);
  const alg::RatFunc abs_det = alg::to_ratfunc(det_sign_ > 0 ? det_ : -det_);
  volume_ = sqrt_of(abs_det);
}

Metric Metric::euclidean(int n) { return Metric(ExprMatrix::identity(n)); }

Metric Metric::diagonal(const std::vector<Expr>& entries) {
  const int n = static_cast<int>(entries.size());
  std::vector<Expr> e(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n; ++i) e[static_cast<std::size_t>(i * n + i)] = entries[static_cast<std::size_t>(i)];
  return Metric(ExprMatrix(n, std::move(e)));
}

const Expr& Metric::volume_factor() const {
  if (!volume_)
    throw UnsupportedClass(
        "volume element sqrt|det g| is not an exact rational expression");
  return *volume_;
}

}  // namespace formcalc
