#include "formcalc/factor.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "formcalc/error.hpp"

namespace formcalc::alg {
namespace {

constexpr unsigned long kDivisorLimit = 1000000;
constexpr std::size_t kCandidateLimit = 4096;

Polynomial d_dx(const Polynomial& p, const Expr& x) { return derivative(p, x.name()).num(); }

Polynomial quotient(const Polynomial& a, const Polynomial& b) {
  auto q = divide_exact(a, b);
  if (!q) throw StructuralError("inexact division during factorization");
  return *q;
}

/// Primitive integer normalization; returns the scale removed.
Rational make_primitive(Polynomial& p) {
  mpz_class den_lcm = 1;
  mpz_class num_gcd = 0;
  for (const auto& [m, c] : p.terms()) {
    mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den_mpz_t());
    mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), c.get_num_mpz_t());
  }
  Rational scale(num_gcd, den_lcm);
  scale.canonicalize();
  if (p.leading().second < 0) scale = -scale;
  p = p.scaled(1 / scale);
  return scale;
}

std::vector<mpz_class> divisors(const mpz_class& v) {
  std::vector<mpz_class> out;
  const mpz_class a = abs(v);
  for (mpz_class d = 1; d * d <= a; ++d) {
    if (a % d == 0) {
      out.push_back(d);
      if (d * d != a) out.push_back(a / d);
    }
  }
  return out;
}

Rational horner(const std::map<int, Rational>& coef, const Rational& x) {
  Rational acc = 0;
  int deg = coef.rbegin()->first;
  for (int k = deg; k >= 0; --k) {
    acc *= x;
    auto it = coef.find(k);
    if (it != coef.end()) acc += it->second;
  }
  return acc;
}

void square_free(const Polynomial& f, int multiplicity, std::vector<Factor>& out) {
  if (f.is_constant()) return;
  const Expr x = f.kernels().front();
  const Polynomial c = content_in(f, x);
  square_free(c, multiplicity, out);
  const Polynomial pp = quotient(f, c);
  if (pp.is_constant()) return;

  // Yun's algorithm in x.
  const Polynomial fp = d_dx(pp, x);
  const Polynomial a0 = gcd(pp, fp);
  Polynomial b = quotient(pp, a0);
  Polynomial cc = quotient(fp, a0);
  Polynomial d = cc - d_dx(b, x);
  for (int i = 1; !b.is_constant(); ++i) {
    const Polynomial a = gcd(b, d);
    if (!a.is_constant()) out.push_back({a, i * multiplicity});
    b = quotient(b, a);
    cc = quotient(d, a);
    d = cc - d_dx(b, x);
  }
}

std::optional<Polynomial> find_linear_factor(const Polynomial& g) {
  const std::vector<Expr> vars = g.kernels();
  for (const Expr& x : vars) {
    if (g.degree_in(x) < 1) continue;
    std::vector<Expr> others;
    for (const Expr& v : vars)
      if (v.compare(x) != 0) others.push_back(v);
    const Polynomial lc = g.leading_coefficient_in(x);
    const std::size_t m = others.size();

    // Base point b with lc(b) != 0 and lc(b + e_j) != 0.
    std::vector<Rational> base(m, 0);
    bool ok = false;
    for (int attempt = 0; attempt < 32 && !ok; ++attempt) {
      for (std::size_t j = 0; j < m; ++j)
        base[j] = attempt == 0 ? 0 : static_cast<long>((attempt * 7 + static_cast<int>(j) * 3) % 9) - 4;
      auto at = [&](std::size_t shift) {
        std::map<std::string, Rational> pt;
        for (std::size_t j = 0; j < m; ++j)
          pt[others[j].name()] = base[j] + (j + 1 == shift ? 1 : 0);
        return pt;
      };
      ok = !evaluate(lc, at(0)).is_zero();
      for (std::size_t j = 1; ok && j <= m; ++j) ok = !evaluate(lc, at(j)).is_zero();
    }
    if (!ok) continue;

    auto roots_at = [&](std::size_t shift) {
      std::map<std::string, Rational> pt;
      for (std::size_t j = 0; j < m; ++j)
        pt[others[j].name()] = base[j] + (j + 1 == shift ? 1 : 0);
      return rational_roots(evaluate(g, pt), x);
    };
    const std::vector<Rational> rb = roots_at(0);
    if (rb.empty()) continue;
    std::vector<std::vector<Rational>> rj;
    std::size_t combos = rb.size();
    bool any_empty = false;
    for (std::size_t j = 1; j <= m; ++j) {
      rj.push_back(roots_at(j));
      if (rj.back().empty()) any_empty = true;
      combos *= std::max<std::size_t>(1, rj.back().size());
    }
    if (any_empty || combos > kCandidateLimit) continue;

    for (const Rational& r : rb) {
      std::vector<Rational> beta(m);
      std::optional<Polynomial> hit;
      std::function<void(std::size_t)> rec = [&](std::size_t j) {
        if (hit) return;
        if (j == m) {
          Rational gamma = -r;
          Polynomial lin = Polynomial::kernel(x);
          for (std::size_t k = 0; k < m; ++k) {
            gamma -= beta[k] * base[k];
            lin += Polynomial::kernel(others[k]).scaled(beta[k]);
          }
          lin += Polynomial::constant(gamma);
          if (divide_exact(g, lin)) hit = lin;
          return;
        }
        for (const Rational& s : rj[j]) {
          beta[j] = r - s;
          rec(j + 1);
        }
      };
      rec(0);
      if (hit) return hit;
    }
  }
  return std::nullopt;
}

}  // namespace

Polynomial evaluate(const Polynomial& p, const std::map<std::string, Rational>& values) {
  Polynomial out;
  for (const auto& [m, c] : p.terms()) {
    Rational coef = c;
    Monomial rest;
    for (const auto& [k, e] : m.factors) {
      auto it = k.kind() == Expr::Kind::Var ? values.find(k.name()) : values.end();
      if (it == values.end()) {
        rest.factors.emplace_back(k, e);
      } else {
        for (int i = 0; i < e; ++i) coef *= it->second;
      }
    }
    out.add_term(coef, rest);
  }
  return out;
}

std::vector<Rational> rational_roots(const Polynomial& p, const Expr& var) {
  std::set<Rational> roots;
  if (p.is_zero() || p.degree_in(var) < 1) return {};
  std::map<int, Rational> coef;
  for (const auto& [k, c] : p.coefficients_in(var)) {
    if (!c.is_constant()) throw InvalidArgument("polynomial is not univariate");
    coef[k] = c.constant_value();
  }
  if (coef.begin()->first > 0) {
    roots.insert(0);
    std::map<int, Rational> shifted;
    const int low = coef.begin()->first;
    for (const auto& [k, c] : coef) shifted[k - low] = c;
    coef = std::move(shifted);
  }
  if (coef.rbegin()->first >= 1) {
    mpz_class den_lcm = 1;
    for (const auto& [k, c] : coef)
      mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den_mpz_t());
    const mpz_class a0 = Rational(coef.begin()->second * den_lcm).get_num();
    const mpz_class an = Rational(coef.rbegin()->second * den_lcm).get_num();
    if (abs(a0) <= kDivisorLimit && abs(an) <= kDivisorLimit) {
      for (const mpz_class& num : divisors(a0)) {
        for (const mpz_class& den : divisors(an)) {
          for (int sign : {1, -1}) {
            Rational cand(sign * num, den);
            cand.canonicalize();
            if (horner(coef, cand) == 0) roots.insert(cand);
          }
        }
      }
    }
  }
  return {roots.begin(), roots.end()};
}

Factorization factor(const Polynomial& p) {
  if (p.is_zero()) throw UnsupportedClass("cannot factor the zero polynomial");
  if (p.has_function_kernel())
    throw UnsupportedClass("factorization needs a polynomial in variables only");

  std::map<Polynomial, int, std::function<bool(const Polynomial&, const Polynomial&)>> merged(
      [](const Polynomial& a, const Polynomial& b) {
        return a.to_expr().compare(b.to_expr()) < 0;
      });

  // Linear factors first, by trial division; the cofactor has none left.
  Polynomial g = p;
  while (g.total_degree() > 1) {
    auto lin = find_linear_factor(g);
    if (!lin) break;
    int mult = 0;
    while (auto q = divide_exact(g, *lin)) {
      g = *q;
      ++mult;
    }
    Polynomial l = *lin;
    make_primitive(l);
    merged[l] += mult;
  }
  if (g.total_degree() == 1) {
    make_primitive(g);
    merged[g] += 1;
  } else if (!g.is_constant()) {
    std::vector<Factor> sqf;
    square_free(g, 1, sqf);
    for (Factor& f : sqf) {
      make_primitive(f.poly);
      merged[f.poly] += f.multiplicity;
    }
  }

  Factorization out;
  Rational lead_product = 1;
  for (const auto& [poly, mult] : merged) {
    for (int i = 0; i < mult; ++i) lead_product *= poly.leading().second;
    out.factors.push_back({poly, mult});
  }
  // Order: by total degree, then canonical tree order.
  std::stable_sort(out.factors.begin(), out.factors.end(), [](const Factor& a, const Factor& b) {
    return a.poly.total_degree() < b.poly.total_degree();
  });
  out.unit = p.leading().second / lead_product;
  return out;
}

}  // namespace formcalc::alg
