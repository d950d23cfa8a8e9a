#include <cmath>
#include <random>

#include "formcalc/error.hpp"
#include "formcalc/expr.hpp"
#include "formcalc/poly.hpp"

namespace formcalc {

Expr simplify(const Expr& e) { return alg::to_ratfunc(e).to_expr(); }

Expr differentiate(const Expr& e, std::string_view var) {
  return alg::derivative(alg::to_ratfunc(e), var).to_expr();
}

bool equivalent(const Expr& a, const Expr& b) {
  return simplify(a - b).is_literal_zero();
}

namespace {

// Value together with a magnitude estimate (sum of absolute values of the
// summands) used to judge floating-point cancellation.
struct Scaled {
  double value;
  double magnitude;
};

Scaled eval_scaled(const Expr& e, const Point& point) {
  switch (e.kind()) {
    case Expr::Kind::Sum: {
      Scaled s{0, 0};
      for (const auto& c : e.children()) {
        const Scaled v = eval_scaled(c, point);
        s.value += v.value;
        s.magnitude += v.magnitude;
      }
      return s;
    }
    case Expr::Kind::Product: {
      Scaled s{1, 1};
      for (const auto& c : e.children()) {
        const Scaled v = eval_scaled(c, point);
        s.value *= v.value;
        s.magnitude *= v.magnitude;
      }
      return s;
    }
    case Expr::Kind::Quotient: {
      const Scaled n = eval_scaled(e.children()[0], point);
      const Scaled d = eval_scaled(e.children()[1], point);
      if (d.value == 0.0) throw DivisionByZero("singular probe point");
      return {n.value / d.value, n.magnitude / std::abs(d.value)};
    }
    default: {
      const double v = to_double(eval_at(e, point));
      return {v, std::abs(v)};
    }
  }
}

}  // namespace

ZeroTest is_zero(const Expr& e, const ProbeOptions& options) {
  const Expr s = simplify(e);
  if (s.is_literal_zero()) return ZeroTest::Zero;
  // Without function nodes the canonical form is exact: nonzero tree means a
  // nonzero rational function.
  if (!s.has_function()) return ZeroTest::NonZero;

  const auto vars = free_variables(s);
  std::mt19937_64 rng(options.seed);
  int evaluated = 0;
  for (int attempt = 0;
       attempt < options.max_attempts && evaluated < options.points;
       ++attempt) {
    Point p;
    for (const auto& v : vars) p[v] = random_probe_rational(rng);
    try {
      const Scaled v = eval_scaled(s, p);
      if (!std::isfinite(v.value)) continue;
      ++evaluated;
      if (std::abs(v.value) > 1e-9 * std::max(1.0, v.magnitude))
        return ZeroTest::NonZero;
    } catch (const DivisionByZero&) {
      continue;
    } catch (const DomainError&) {
      continue;
    }
  }
  return ZeroTest::ProbablyNonZero;
}

}  // namespace formcalc
