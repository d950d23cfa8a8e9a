#include "formcalc/manifold.hpp"

#include <set>

#include "formcalc/error.hpp"

namespace formcalc {

Connection::Connection(int n, std::vector<Expr> entries)
    : n_(n), entries_(std::move(entries)) {
  if (n < 0 || entries_.size() != static_cast<std::size_t>(n * n * n))
    throw DimensionMismatch("connection must have n^3 entries");
  for (auto& e : entries_) e = simplify(e);
}

Connection Connection::zero(int n) {
  return Connection(n, std::vector<Expr>(static_cast<std::size_t>(n * n * n)));
}

Manifold::Manifold(Coords coords, std::optional<Connection> connection,
                   std::optional<Metric> metric)
    : coords_(std::move(coords)),
      connection_(std::move(connection)),
      metric_(std::move(metric)) {
  std::set<std::string> seen(coords_.begin(), coords_.end());
  if (seen.size() != coords_.size())
    throw InvalidArgument("coordinate names must be unique");
  if (connection_ && connection_->dim() != dim())
    throw DimensionMismatch("connection dimension differs from manifold");
  if (metric_ && metric_->dim() != dim())
    throw DimensionMismatch("metric dimension differs from manifold");
}

Manifold Manifold::flat(int n) { return Manifold(default_coords(n)); }

Manifold Manifold::euclidean(int n) {
  return Manifold(default_coords(n), std::nullopt, Metric::euclidean(n));
}

void Manifold::require_form(const Form& f) const {
  if (f.coords() != coords_)
    throw DimensionMismatch("form coordinates differ from manifold coordinates");
}

TorsionTable::TorsionTable(int n, std::vector<Expr> entries)
    : n_(n), entries_(std::move(entries)) {}

TorsionTable torsion_commutator(const Manifold& m) {
  if (!m.connection()) throw MissingConnection();
  const Connection& g = *m.connection();
  const int n = m.dim();
  std::vector<Expr> t(static_cast<std::size_t>(n * n * n));
  for (int s = 0; s < n; ++s) {
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        t[static_cast<std::size_t>((s * n + a) * n + b)] =
            simplify(g(s, b, a) - g(s, a, b));
      }
    }
  }
  return TorsionTable(n, std::move(t));
}

Form basis_differential(const Manifold& m, int sigma) {
  const int n = m.dim();
  if (!m.connection() || n < 2) return Form(m.coords(), 2);
  const TorsionTable t = torsion_commutator(m);
  std::vector<Form::RawTerm> raw;
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      if (!t(sigma, a, b).is_literal_zero()) raw.push_back({{a, b}, t(sigma, a, b)});
    }
  }
  return Form::from_terms(m.coords(), 2, std::move(raw));
}

namespace {

/// sum_I a_I d(dx^I) with d(dx^{i_0} ^ ... ^ dx^{i_{p-1}}) =
/// sum_k (-1)^k dx^{i_0} ^ ... ^ d(dx^{i_k}) ^ ... ^ dx^{i_{p-1}}.
Form torsion_part(const Manifold& m, const Form& theta) {
  const int n = m.dim();
  const int p = theta.degree();
  if (!m.connection() || p == 0 || p + 1 > n) return Form(m.coords(), p + 1);
  const TorsionTable t = torsion_commutator(m);
  std::vector<Form::RawTerm> raw;
  for (const auto& [mi, coef] : theta.terms()) {
    for (int k = 0; k < p; ++k) {
      const int sigma = mi[k];
      for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
          const Expr& tc = t(sigma, a, b);
          if (tc.is_literal_zero()) continue;
          std::vector<int> idx;
          for (int j = 0; j < p; ++j) {
            if (j == k) {
              idx.push_back(a);
              idx.push_back(b);
            } else {
              idx.push_back(mi[j]);
            }
          }
          const Expr c = tc * coef;
          raw.emplace_back(std::move(idx), k % 2 == 0 ? c : -c);
        }
      }
    }
  }
  return Form::from_terms(m.coords(), p + 1, std::move(raw));
}

}  // namespace

CommutatorReport commutator(const Manifold& m, const Form& theta) {
  m.require_form(theta);
  if (theta.degree() != 1) {
    Form coef = d_flat(theta);
    Form metric = torsion_part(m, theta);
    Form total = add(coef, metric);
    return {std::move(total), std::move(coef), std::move(metric)};
  }

  const int n = m.dim();
  const auto& x = m.coords();
  std::vector<Expr> a(static_cast<std::size_t>(n));
  for (const auto& [mi, c] : theta.terms()) a[static_cast<std::size_t>(mi[0])] = c;

  std::vector<Form::RawTerm> coef_raw;
  std::vector<Form::RawTerm> metric_raw;
  const std::optional<TorsionTable> t =
      m.connection() ? std::optional(torsion_commutator(m)) : std::nullopt;
  for (int al = 0; al < n; ++al) {
    for (int be = al + 1; be < n; ++be) {
      const auto ual = static_cast<std::size_t>(al);
      const auto ube = static_cast<std::size_t>(be);
      coef_raw.push_back(
          {{al, be}, differentiate(a[ube], x[ual]) - differentiate(a[ual], x[ube])});
      if (t) {
        std::vector<Expr> parts;
        for (int s = 0; s < n; ++s) {
          if (!a[static_cast<std::size_t>(s)].is_literal_zero())
            parts.push_back((*t)(s, al, be) * a[static_cast<std::size_t>(s)]);
        }
        metric_raw.push_back({{al, be}, Expr::sum(std::move(parts))});
      }
    }
  }
  Form coef = Form::from_terms(x, 2, std::move(coef_raw));
  Form metric = Form::from_terms(x, 2, std::move(metric_raw));
  Form total = add(coef, metric);
  return {std::move(total), std::move(coef), std::move(metric)};
}

Form d_evolutionary(const Manifold& m, const Form& theta) {
  m.require_form(theta);
  if (theta.degree() == 1) return commutator(m, theta).total;
  return add(d_flat(theta), torsion_part(m, theta));
}

bool is_deforming(const Manifold& m, const ProbeOptions& options) {
  if (!m.connection()) return false;
  const TorsionTable t = torsion_commutator(m);
  const int n = m.dim();
  for (int s = 0; s < n; ++s) {
    for (int a = 0; a < n; ++a) {
      for (int b = a + 1; b < n; ++b) {
        if (is_zero(t(s, a, b), options) != ZeroTest::Zero) return true;
      }
    }
  }
  return false;
}

}  // namespace formcalc
