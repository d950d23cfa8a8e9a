#include "formcalc/hodge.hpp"

#include <map>

#include "formcalc/error.hpp"

namespace formcalc {
namespace {

const Metric& metric_of(const Manifold& m) {
  if (!m.metric()) throw MissingMetric();
  return *m.metric();
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

std::vector<int> complement(int n, const std::vector<int>& idx) {
  std::vector<int> out;
  std::size_t k = 0;
  for (int i = 0; i < n; ++i) {
    if (k < idx.size() && idx[k] == i) {
      ++k;
    } else {
      out.push_back(i);
    }
  }
  return out;
}

int permutation_sign(const std::vector<int>& first, const std::vector<int>& second) {
  std::vector<int> all = first;
  all.insert(all.end(), second.begin(), second.end());
  return canonical_index(std::move(all)).first;
}

}  // namespace

Form star(const Manifold& m, const Form& theta) {
  const Metric& g = metric_of(m);
  m.require_form(theta);
  const int n = m.dim();
  const int p = theta.degree();
  if (p > n) throw InvalidArgument("star needs a form of degree <= n");
  const Expr& vol = g.volume_factor();

  std::vector<std::vector<int>> cols;
  std::vector<int> scratch;
  increasing_tuples(n, p, scratch, 0, cols);

  std::map<std::pair<std::vector<int>, std::vector<int>>, Expr> minors;
  auto minor = [&](const std::vector<int>& rows, const std::vector<int>& cs) {
    auto key = std::make_pair(rows, cs);
    auto it = minors.find(key);
    if (it == minors.end()) {
      Expr d = rows.empty() ? Expr(1L) : determinant(g.inverse().minor(rows, cs));
      it = minors.emplace(std::move(key), std::move(d)).first;
    }
    return it->second;
  };

  std::vector<Form::RawTerm> raw;
  for (const auto& [mi, a] : theta.terms()) {
    const std::vector<int> rows(mi.indices().begin(), mi.indices().end());
    for (const auto& j : cols) {
      const Expr d = minor(rows, j);
      if (d.is_literal_zero()) continue;
      const std::vector<int> jc = complement(n, j);
      const int sign = permutation_sign(j, jc);
      Expr c = a * vol * d;
      raw.emplace_back(jc, sign > 0 ? c : -c);
    }
  }
  return Form::from_terms(m.coords(), n - p, std::move(raw));
}

Form codifferential(const Manifold& m, const Form& theta) {
  const Metric& g = metric_of(m);
  const int n = m.dim();
  const int q = theta.degree();
  if (q == 0) throw InvalidArgument("codifferential needs a form of degree >= 1");
  if (q > n) return Form(m.coords(), q - 1);
  const Form r = star(m, d_flat(star(m, theta)));
  const int sign = ((n * (q + 1)) % 2 == 0 ? 1 : -1) * g.det_sign();
  return sign > 0 ? r : negate(r);
}

LaplacianPair laplacian_both(const Manifold& m, const Form& theta) {
  m.require_form(theta);
  const int n = m.dim();
  const int q = theta.degree();
  const Form d_delta =
      q == 0 ? Form(m.coords(), 0) : d_flat(codifferential(m, theta));
  const Form delta_d =
      q + 1 > n ? Form(m.coords(), q) : codifferential(m, d_flat(theta));
  return {add(d_delta, delta_d), subtract(d_delta, delta_d)};
}

Form laplacian(const Manifold& m, const Form& theta, LaplacianVariant variant) {
  auto both = laplacian_both(m, theta);
  return variant == LaplacianVariant::Standard ? std::move(both.standard)
                                               : std::move(both.difference);
}

}  // namespace formcalc
