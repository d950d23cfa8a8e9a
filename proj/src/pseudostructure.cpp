#include "formcalc/pseudostructure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>

#include "formcalc/error.hpp"
#include "formcalc/factor.hpp"
#include "formcalc/hodge.hpp"
#include "formcalc/linalg.hpp"

namespace formcalc {
namespace {

int numeric_rank(std::vector<std::vector<double>> a) {
  const std::size_t rows = a.size();
  const std::size_t cols = rows == 0 ? 0 : a[0].size();
  double scale = 0;
  for (const auto& r : a)
    for (double v : r) scale = std::max(scale, std::abs(v));
  const double tol = 1e-9 * std::max(1.0, scale);
  int rank = 0;
  std::size_t row = 0;
  for (std::size_t c = 0; c < cols && row < rows; ++c) {
    std::size_t piv = row;
    for (std::size_t r = row + 1; r < rows; ++r)
      if (std::abs(a[r][c]) > std::abs(a[piv][c])) piv = r;
    if (std::abs(a[piv][c]) <= tol) continue;
    std::swap(a[piv], a[row]);
    for (std::size_t r = row + 1; r < rows; ++r) {
      const double f = a[r][c] / a[row][c];
      for (std::size_t k = c; k < cols; ++k) a[r][k] -= f * a[row][k];
    }
    ++row;
    ++rank;
  }
  return rank;
}

void increasing_tuples(int n, int p, std::vector<int>& cur, int start,
                       std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == p) {
    out.push_back(cur);
    return;
  }
  for (int i = start; i < n; ++i) {
    cur.push_back(i);
    increasing_tuples(n, p, cur, i + 1, out);
    cur.pop_back();
  }
}

void require_ambient(const Pseudostructure& pi, const Form& theta) {
  if (theta.coords() != pi.ambient())
    throw DimensionMismatch("form coordinates differ from the pseudostructure's ambient space");
}

double eval_double(const Expr& e, const std::vector<std::string>& vars,
                   const std::vector<double>& x) {
  Point p;
  for (std::size_t i = 0; i < vars.size(); ++i) p[vars[i]] = Rational(x[i]);
  try {
    return to_double(eval_at(e, p));
  } catch (const Error&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

}  // namespace

Pseudostructure::Pseudostructure(Coords params, Coords ambient, std::vector<Expr> map, bool)
    : params_(std::move(params)), ambient_(std::move(ambient)), map_(std::move(map)) {
  if (map_.size() != ambient_.size())
    throw DimensionMismatch("pseudostructure map needs one expression per ambient coordinate");
  if (params_.size() > ambient_.size())
    throw DimensionMismatch("pseudostructure has more parameters than ambient dimensions");
  const std::set<std::string> pset(params_.begin(), params_.end());
  if (pset.size() != params_.size()) throw InvalidArgument("parameter names must be unique");
  for (auto& e : map_) {
    e = simplify(e);
    for (const auto& v : free_variables(e)) {
      if (!pset.count(v) &&
          std::find(ambient_.begin(), ambient_.end(), v) != ambient_.end())
        throw InvalidArgument("pseudostructure map refers to ambient coordinate '" + v + "'");
    }
  }
  jacobian_.reserve(map_.size() * params_.size());
  for (const auto& e : map_)
    for (const auto& t : params_) jacobian_.push_back(differentiate(e, t));
}

Pseudostructure::Pseudostructure(Coords params, Coords ambient, std::vector<Expr> map,
                                 const ProbeOptions& options)
    : Pseudostructure(std::move(params), std::move(ambient), std::move(map), true) {
  const int n = ambient_dim();
  const int k = dim();
  if (k == 0) return;
  std::set<std::string> names(params_.begin(), params_.end());
  for (const auto& e : jacobian_)
    for (const auto& v : free_variables(e)) names.insert(v);
  const std::vector<std::string> vars(names.begin(), names.end());

  std::mt19937_64 rng(options.seed);
  int best = 0;
  for (int attempt = 0; attempt < options.max_attempts && attempt < 64 && best < k; ++attempt) {
    std::vector<double> x;
    for (std::size_t i = 0; i < vars.size(); ++i) x.push_back(random_probe_rational(rng).get_d());
    std::vector<std::vector<double>> jac(static_cast<std::size_t>(n),
                                         std::vector<double>(static_cast<std::size_t>(k)));
    bool finite = true;
    for (int i = 0; i < n && finite; ++i) {
      for (int j = 0; j < k && finite; ++j) {
        const double v = eval_double(jacobian(i, j), vars, x);
        finite = std::isfinite(v);
        jac[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = v;
      }
    }
    if (finite) best = std::max(best, numeric_rank(jac));
  }
  if (best < k)
    throw InvalidArgument("pseudostructure map is not an immersion: Jacobian rank " +
                          std::to_string(best) + " < " + std::to_string(k));
}

Pseudostructure Pseudostructure::identity(const Coords& coords) {
  std::vector<Expr> map;
  for (const auto& c : coords) map.push_back(Expr::var(c));
  return Pseudostructure(coords, coords, std::move(map), true);
}

Form pullback(const Pseudostructure& pi, const Form& theta) {
  require_ambient(pi, theta);
  const int p = theta.degree();
  const int k = pi.dim();
  if (p > k) return Form(pi.params(), p);

  Bindings bind;
  for (int i = 0; i < pi.ambient_dim(); ++i)
    bind[pi.ambient()[static_cast<std::size_t>(i)]] = pi.map()[static_cast<std::size_t>(i)];

  std::vector<std::vector<int>> cols;
  std::vector<int> scratch;
  increasing_tuples(k, p, scratch, 0, cols);

  std::map<std::pair<MultiIndex, std::vector<int>>, Expr> minors;
  std::vector<Form::RawTerm> raw;
  for (const auto& [mi, a] : theta.terms()) {
    const Expr coef = substitute(a, bind);
    if (coef.is_literal_zero()) continue;
    for (const auto& j : cols) {
      auto key = std::make_pair(mi, j);
      auto it = minors.find(key);
      if (it == minors.end()) {
        std::vector<Expr> entries;
        for (int r = 0; r < p; ++r)
          for (int c = 0; c < p; ++c)
            entries.push_back(pi.jacobian(mi[r], j[static_cast<std::size_t>(c)]));
        Expr d = p == 0 ? Expr(1L) : determinant(ExprMatrix(p, std::move(entries)));
        it = minors.emplace(std::move(key), std::move(d)).first;
      }
      if (!it->second.is_literal_zero()) raw.emplace_back(j, coef * it->second);
    }
  }
  return Form::from_terms(pi.params(), p, std::move(raw));
}

Form d_pi(const Pseudostructure& pi, const Form& theta) { return d_flat(pullback(pi, theta)); }

ZeroTest is_closed_on(const Pseudostructure& pi, const Form& theta, const ProbeOptions& options) {
  return is_zero_form(d_pi(pi, theta), options);
}

DualClosure defines_pseudostructure(const Manifold& m, const Pseudostructure& pi,
                                    const Form& theta, const ProbeOptions& options) {
  m.require_form(theta);
  return {is_closed_on(pi, theta, options), is_closed_on(pi, star(m, theta), options)};
}

Expr jacobian_determinant(const std::vector<Expr>& map, const Coords& inputs) {
  const std::size_t n = map.size();
  if (inputs.size() != n)
    throw DimensionMismatch("Jacobian determinant needs as many inputs as outputs");
  if (n == 0) return Expr(1L);
  std::vector<Expr> entries;
  for (const auto& f : map)
    for (const auto& x : inputs) entries.push_back(differentiate(f, x));
  return simplify(determinant(ExprMatrix(static_cast<int>(n), std::move(entries))));
}

Expr poisson_bracket(const Expr& f, const Expr& g,
                     const std::vector<std::pair<std::string, std::string>>& pairs) {
  if (pairs.empty()) throw InvalidArgument("Poisson bracket needs at least one (q, p) pair");
  std::set<std::string> seen;
  std::vector<Expr> terms;
  for (const auto& [q, p] : pairs) {
    if (q.empty() || p.empty()) throw InvalidArgument("empty canonical coordinate name");
    if (!seen.insert(q).second || !seen.insert(p).second)
      throw InvalidArgument("canonical coordinate names must be distinct");
    terms.push_back(differentiate(f, q) * differentiate(g, p));
    terms.push_back(-(differentiate(f, p) * differentiate(g, q)));
  }
  return simplify(Expr::sum(std::move(terms)));
}

DegeneracyReport degenerate_locus(const Expr& e, const ProbeOptions& options) {
  DegeneracyReport rep;
  rep.expression = simplify(e);
  const alg::RatFunc r = alg::to_ratfunc(rep.expression);

  if (!r.num().has_function_kernel() && !r.den().has_function_kernel()) {
    rep.exact = true;
    if (r.num().is_zero()) {
      rep.unit = 0;
      rep.note = "vanishes identically";
      return rep;
    }
    if (r.num().is_constant()) {
      rep.unit = r.num().constant_value();
      rep.note = "nondegenerate everywhere";
      return rep;
    }
    const alg::Factorization fac = alg::factor(r.num());
    rep.unit = fac.unit;
    for (const auto& f : fac.factors) rep.factors.push_back({f.poly.to_expr(), f.multiplicity});
    if (r.den().is_constant()) {
      rep.unit /= r.den().constant_value();
    } else {
      rep.note = "poles excluded where " + r.den().to_expr().str() + " = 0";
    }
    return rep;
  }

  // Sign changes along random lines, refined by bisection.
  const auto names = free_variables(rep.expression);
  const std::vector<std::string> vars(names.begin(), names.end());
  const std::size_t m = vars.size();
  std::mt19937_64 rng(options.seed);
  std::normal_distribution<double> gauss;
  constexpr int kLines = 32;
  constexpr int kSteps = 64;
  constexpr std::size_t kMaxZeros = 3;
  auto in_box = [](const std::vector<double>& x) {
    return std::all_of(x.begin(), x.end(), [](double v) { return std::abs(v) <= 3.0; });
  };
  for (int line = 0; line < kLines && m > 0 && rep.sample_zeros.size() < kMaxZeros; ++line) {
    std::vector<double> a(m), dir(m);
    double norm = 0;
    for (std::size_t i = 0; i < m; ++i) {
      a[i] = random_probe_rational(rng).get_d();
      dir[i] = gauss(rng);
      norm += dir[i] * dir[i];
    }
    norm = std::sqrt(norm);
    if (norm == 0) continue;
    for (double& d : dir) d /= norm;
    auto at = [&](double s) {
      std::vector<double> x(m);
      for (std::size_t i = 0; i < m; ++i) x[i] = a[i] + s * dir[i];
      return x;
    };
    auto f = [&](double s) { return eval_double(rep.expression, vars, at(s)); };

    std::vector<double> vals(kSteps + 1);
    double scale = 1;
    for (int i = 0; i <= kSteps; ++i) {
      vals[static_cast<std::size_t>(i)] = f(-6.0 + 12.0 * i / kSteps);
      if (std::isfinite(vals[static_cast<std::size_t>(i)]))
        scale = std::max(scale, std::abs(vals[static_cast<std::size_t>(i)]));
    }
    for (int i = 0; i < kSteps && rep.sample_zeros.size() < kMaxZeros; ++i) {
      double lo = -6.0 + 12.0 * i / kSteps, hi = -6.0 + 12.0 * (i + 1) / kSteps;
      double flo = vals[static_cast<std::size_t>(i)], fhi = vals[static_cast<std::size_t>(i + 1)];
      if (!std::isfinite(flo) || !std::isfinite(fhi) || (flo > 0) == (fhi > 0)) continue;
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if (!std::isfinite(fm)) break;
        if ((fm > 0) == (flo > 0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      const double s = 0.5 * (lo + hi);
      const double fs = f(s);
      const auto x = at(s);
      if (!std::isfinite(fs) || std::abs(fs) > 1e-8 * scale || !in_box(x)) continue;
      const bool seen = std::any_of(
          rep.sample_zeros.begin(), rep.sample_zeros.end(), [&](const auto& z) {
            for (std::size_t k = 0; k < m; ++k)
              if (std::abs(z.at(vars[k]) - x[k]) > 1e-6) return false;
            return true;
          });
      if (seen) continue;
      std::map<std::string, double> zero;
      for (std::size_t k = 0; k < m; ++k) zero[vars[k]] = x[k];
      rep.sample_zeros.push_back(std::move(zero));
    }
  }
  rep.note = rep.sample_zeros.empty() ? "probe: no zero found in probe box"
                                      : "probe: sample zeros located numerically";
  return rep;
}

std::vector<ClosureOutcome> closure_batch_serial(const std::vector<ClosureCase>& cases,
                                                 const ProbeOptions& options) {
  std::vector<ClosureOutcome> out(cases.size());
  for (std::size_t i = 0; i < cases.size(); ++i) {
    try {
      out[i].result = is_closed_on(cases[i].pi, cases[i].theta, options);
    } catch (const std::exception& ex) {
      out[i].error = ex.what();
    }
  }
  return out;
}

std::vector<ClosureOutcome> closure_batch(const std::vector<ClosureCase>& cases,
                                          const ProbeOptions& options) {
  std::vector<ClosureOutcome> out(cases.size());
  const long count = static_cast<long>(cases.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < count; ++i) {
    const auto u = static_cast<std::size_t>(i);
    try {
      out[u].result = is_closed_on(cases[u].pi, cases[u].theta, options);
    } catch (const std::exception& ex) {
      out[u].error = ex.what();
    }
  }
  return out;
}

}  // namespace formcalc
