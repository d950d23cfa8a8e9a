#pragma once

// Test-only generators and oracles. The oracles never call the simplifier or
// the symbolic differentiator; they work on dense exponent tables or plain
// doubles so they stay independent of the code under test.

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "formcalc/expr.hpp"
#include "formcalc/error.hpp"
#include "formcalc/forms.hpp"
#include "formcalc/manifold.hpp"
#include "formcalc/pseudostructure.hpp"

namespace formcalc::testing {

/// Dense multivariate polynomial: exponent vector -> coefficient.
struct DensePoly {
  std::vector<std::string> vars;
  std::map<std::vector<int>, Rational> terms;

  explicit DensePoly(std::vector<std::string> v) : vars(std::move(v)) {}

  void add(const std::vector<int>& e, const Rational& c) {
    Rational& slot = terms[e];
    slot += c;
    if (slot == 0) terms.erase(e);
  }

  DensePoly operator*(const DensePoly& o) const {
    DensePoly out(vars);
    for (const auto& [ea, ca] : terms) {
      for (const auto& [eb, cb] : o.terms) {
        std::vector<int> e(ea.size());
        for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
        out.add(e, ca * cb);
      }
    }
    return out;
  }

  DensePoly operator+(const DensePoly& o) const {
    DensePoly out = *this;
    for (const auto& [e, c] : o.terms) out.add(e, c);
    return out;
  }

  DensePoly derivative(std::size_t var) const {
    DensePoly out(vars);
    for (const auto& [e, c] : terms) {
      if (e[var] == 0) continue;
      auto d = e;
      d[var] -= 1;
      out.add(d, c * e[var]);
    }
    return out;
  }

  Rational eval(const Point& p) const {
    Rational s = 0;
    for (const auto& [e, c] : terms) {
      Rational t = c;
      for (std::size_t i = 0; i < e.size(); ++i) {
        for (int k = 0; k < e[i]; ++k) t *= p.at(vars[i]);
      }
      s += t;
    }
    return s;
  }

  /// Raw (unsimplified) tree with shuffled term order.
  template <class Rng>
  Expr to_raw_expr(Rng& rng) const {
    std::vector<Expr> ts;
    for (const auto& [e, c] : terms) {
      std::vector<Expr> f{Expr(c)};
      for (std::size_t i = 0; i < e.size(); ++i) {
        for (int k = 0; k < e[i]; ++k) f.push_back(Expr::var(vars[i]));
      }
      std::shuffle(f.begin(), f.end(), rng);
      ts.push_back(Expr::product(std::move(f)));
    }
    std::shuffle(ts.begin(), ts.end(), rng);
    return Expr::sum(std::move(ts));
  }
};

template <class Rng>
DensePoly random_dense_poly(Rng& rng, const std::vector<std::string>& vars,
                            int max_degree, int max_terms) {
  DensePoly p(vars);
  std::uniform_int_distribution<int> nterms(1, max_terms);
  std::uniform_int_distribution<int> coef(-4, 4);
  std::uniform_int_distribution<int> var(0, std::max(0, static_cast<int>(vars.size()) - 1));
  std::uniform_int_distribution<int> deg(0, max_degree);
  const int n = nterms(rng);
  for (int t = 0; t < n; ++t) {
    std::vector<int> e(vars.size(), 0);
    const int d = vars.empty() ? 0 : deg(rng);
    for (int k = 0; k < d; ++k) e[static_cast<std::size_t>(var(rng))] += 1;
    int c = coef(rng);
    if (c == 0) c = 1;
    p.add(e, c);
  }
  return p;
}

template <class Rng>
Expr random_poly(Rng& rng, const std::vector<std::string>& vars,
                 int max_degree = 3, int max_terms = 3) {
  return random_dense_poly(rng, vars, max_degree, max_terms).to_raw_expr(rng);
}

/// Random form of degree p on the given coordinates with polynomial
/// coefficients; each basis element is present with probability 1/2.
template <class Rng>
Form random_form(Rng& rng, const Coords& coords, int p, int max_degree = 3,
                 int max_terms = 2) {
  const int n = static_cast<int>(coords.size());
  std::vector<Form::RawTerm> raw;
  std::bernoulli_distribution keep(0.6);
  std::vector<int> idx;
  // Enumerate increasing index tuples of length p.
  std::function<void(int)> rec = [&](int start) {
    if (static_cast<int>(idx.size()) == p) {
      if (keep(rng)) raw.emplace_back(idx, random_poly(rng, coords, max_degree, max_terms));
      return;
    }
    for (int i = start; i < n; ++i) {
      idx.push_back(i);
      rec(i + 1);
      idx.pop_back();
    }
  };
  if (p <= n) rec(0);
  return Form::from_terms(coords, p, std::move(raw));
}

template <class Rng>
Point random_point(Rng& rng, const std::vector<std::string>& vars) {
  Point p;
  for (const auto& v : vars) p[v] = random_probe_rational(rng);
  return p;
}

/// Central finite difference of a double-valued evaluation.
inline double central_difference(const Expr& e, Point p, const std::string& var,
                                 double h = 1e-5) {
  // Evaluate in double with the variable shifted; other variables stay exact.
  const double x0 = p.at(var).get_d();
  Point plus = p, minus = p;
  plus[var] = Rational(x0 + h);
  minus[var] = Rational(x0 - h);
  const double hp = plus[var].get_d() - x0;
  const double hm = x0 - minus[var].get_d();
  return (to_double(eval_at(e, plus)) - to_double(eval_at(e, minus))) / (hp + hm);
}

using Vectors = std::vector<std::vector<double>>;

/// Leibniz-formula determinant of a small dense matrix.
inline double dense_det(const std::vector<std::vector<double>>& m) {
  const std::size_t n = m.size();
  if (n == 0) return 1.0;
  std::vector<std::size_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = i;
  double total = 0;
  do {
    int inversions = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (perm[i] > perm[j]) ++inversions;
    double prod = inversions % 2 == 0 ? 1.0 : -1.0;
    for (std::size_t i = 0; i < n; ++i) prod *= m[i][perm[i]];
    total += prod;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return total;
}

/// omega(v_1, ..., v_p) at a point: sum_I a_I(point) det[v_k^{i_j}].
inline double form_on_vectors(const Form& f, const Point& point, const Vectors& v) {
  double total = 0;
  for (const auto& [mi, c] : f.terms()) {
    std::vector<std::vector<double>> m(v.size(), std::vector<double>(v.size()));
    for (std::size_t k = 0; k < v.size(); ++k)
      for (std::size_t j = 0; j < v.size(); ++j)
        m[k][j] = v[k][static_cast<std::size_t>(mi[static_cast<int>(j)])];
    total += to_double(eval_at(c, point)) * dense_det(m);
  }
  return total;
}

/// (a ^ b)(v) via the shuffle formula.
inline double wedge_oracle(const Form& a, const Form& b, const Point& point,
                           const Vectors& v) {
  const int p = a.degree();
  const int q = b.degree();
  double total = 0;
  std::vector<int> sel(static_cast<std::size_t>(p + q), 0);
  std::fill(sel.begin(), sel.begin() + p, 1);
  std::sort(sel.begin(), sel.end());
  do {
    Vectors va, vb;
    std::vector<int> order_a, order_b;
    for (int i = 0; i < p + q; ++i) {
      if (sel[static_cast<std::size_t>(i)]) {
        va.push_back(v[static_cast<std::size_t>(i)]);
        order_a.push_back(i);
      } else {
        vb.push_back(v[static_cast<std::size_t>(i)]);
        order_b.push_back(i);
      }
    }
    std::vector<int> perm = order_a;
    perm.insert(perm.end(), order_b.begin(), order_b.end());
    int inversions = 0;
    for (std::size_t i = 0; i < perm.size(); ++i)
      for (std::size_t j = i + 1; j < perm.size(); ++j)
        if (perm[i] > perm[j]) ++inversions;
    const double sign = inversions % 2 == 0 ? 1.0 : -1.0;
    total += sign * form_on_vectors(a, point, va) * form_on_vectors(b, point, vb);
  } while (std::next_permutation(sel.begin(), sel.end()));
  return total;
}

/// d omega(v_0..v_p) = sum_i (-1)^i D_{v_i} omega(v_0..^v_i..v_p) for constant
/// vector fields, with central differences for the directional derivative.
inline double d_oracle(const Form& f, const Point& point, const Vectors& v,
                       double h = 1e-5) {
  double total = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    Vectors rest;
    for (std::size_t j = 0; j < v.size(); ++j)
      if (j != i) rest.push_back(v[j]);
    Point plus = point, minus = point;
    for (std::size_t k = 0; k < f.coords().size(); ++k) {
      const auto& name = f.coords()[k];
      const double x0 = point.at(name).get_d();
      plus[name] = Rational(x0 + h * v[i][k]);
      minus[name] = Rational(x0 - h * v[i][k]);
    }
    const double deriv =
        (form_on_vectors(f, plus, rest) - form_on_vectors(f, minus, rest)) / (2 * h);
    total += (i % 2 == 0 ? 1.0 : -1.0) * deriv;
  }
  return total;
}

template <class Rng>
Vectors random_vectors(Rng& rng, int count, int n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Vectors v(static_cast<std::size_t>(count), std::vector<double>(static_cast<std::size_t>(n)));
  for (auto& row : v)
    for (auto& x : row) x = u(rng);
  return v;
}

inline bool close_rel(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max({1.0, std::abs(a), std::abs(b)});
}

/// Random polynomial connection coefficients of degree <= 1.
template <class Rng>
Connection random_connection(Rng& rng, int n, bool symmetric) {
  std::vector<Expr> e(static_cast<std::size_t>(n * n * n));
  const Coords x = default_coords(n);
  for (int s = 0; s < n; ++s)
    for (int b = 0; b < n; ++b)
      for (int a = 0; a < n; ++a) {
        if (symmetric && a < b) continue;
        Expr g = rng() % 3 == 0 ? Expr(0L) : random_poly(rng, x, 1, 2);
        e[static_cast<std::size_t>((s * n + b) * n + a)] = g;
        if (symmetric) e[static_cast<std::size_t>((s * n + a) * n + b)] = g;
      }
  return Connection(n, std::move(e));
}

/// x_i = t_i + poly for i < k, poly otherwise; redrawn until the map is an
/// immersion.
template <class Rng>
Pseudostructure random_immersion(Rng& rng, int k, int n) {
  const Coords t = default_coords(k, "t");
  while (true) {
    std::vector<Expr> map;
    for (int i = 0; i < n; ++i) {
      Expr e = random_poly(rng, t, 2, 2);
      if (i < k) e = e + Expr::var(t[static_cast<std::size_t>(i)]);
      map.push_back(e);
    }
    try {
      return Pseudostructure(t, default_coords(n), map);
    } catch (const InvalidArgument&) {
    }
  }
}

}  // namespace formcalc::testing
