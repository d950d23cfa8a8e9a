#include "formcalc/evolution.hpp"

#include <algorithm>

#include "formcalc/error.hpp"
#include "formcalc/poly.hpp"

namespace formcalc {
namespace {

Identity verdict_of(ZeroTest z) {
  switch (z) {
    case ZeroTest::Zero: return Identity::Identical;
    case ZeroTest::NonZero: return Identity::Nonidentical;
    case ZeroTest::ProbablyNonZero: return Identity::Undetermined;
  }
  return Identity::Undetermined;
}

/// Integral over s in [0, 1] of s^(p-1) a(s y), for a polynomial in y.
Expr homotopy_weighted(const Expr& a, int p, const Coords& coords) {
  const alg::RatFunc r = alg::to_ratfunc(a);
  auto is_coord = [&](const Expr& k) {
    return k.kind() == Expr::Kind::Var &&
           std::find(coords.begin(), coords.end(), k.name()) != coords.end();
  };
  auto touches = [&](const Expr& k) {
    return std::any_of(coords.begin(), coords.end(),
                       [&](const std::string& c) { return depends_on(k, c); });
  };
  for (const Expr& k : r.den().kernels()) {
    if (touches(k))
      throw UnsupportedClass("antiderivative needs coefficients polynomial in the coordinates");
  }
  alg::Polynomial out;
  for (const auto& [m, c] : r.num().terms()) {
    int degree = 0;
    for (const auto& [k, e] : m.factors) {
      if (is_coord(k)) {
        degree += e;
      } else if (touches(k)) {
        throw UnsupportedClass("antiderivative needs coefficients polynomial in the coordinates");
      }
    }
    out.add_term(c / (p + degree), m);
  }
  return alg::RatFunc(out, r.den()).to_expr();
}

}  // namespace

std::string_view to_string(Identity v) {
  switch (v) {
    case Identity::Identical: return "Identical";
    case Identity::Nonidentical: return "Nonidentical";
    case Identity::Undetermined: return "Undetermined";
  }
  return "Undetermined";
}

EvolutionaryRelation build_relation(const BalanceSystem& b) {
  if (b.A.size() != b.coords.size())
    throw DimensionMismatch("balance system needs one coefficient per coordinate");
  if (b.manifold && b.manifold->coords() != b.coords)
    throw DimensionMismatch("balance coordinates differ from the manifold's");
  std::vector<Form::RawTerm> raw;
  for (std::size_t i = 0; i < b.A.size(); ++i) raw.push_back({{static_cast<int>(i)}, b.A[i]});
  Form omega = Form::from_terms(b.coords, 1, std::move(raw));
  return relation_from_form(b.psi, std::move(omega), b.manifold ? *b.manifold : Manifold(b.coords));
}

EvolutionaryRelation relation_from_form(std::string psi, Form omega, Manifold space) {
  CommutatorReport rep = commutator(space, omega);
  return {std::move(psi), std::move(omega), std::move(space), std::move(rep)};
}

Identity nonidentity_check(const EvolutionaryRelation& r, const ProbeOptions& options) {
  return verdict_of(is_zero_form(r.commutator.total, options));
}

CommutatorDecomposition commutator_decomposition(const EvolutionaryRelation& r) {
  return {r.commutator.coefficient_term, r.commutator.metric_term};
}

Form poincare_antiderivative(const Form& omega, const ProbeOptions& options) {
  const int p = omega.degree();
  if (p == 0) throw InvalidArgument("antiderivative needs a form of degree >= 1");
  const ZeroTest closed = is_closed_flat(omega, options);
  if (closed == ZeroTest::NonZero) throw NotClosed("form is not closed");
  if (closed == ZeroTest::ProbablyNonZero) throw NotClosed("closure of the form is undetermined");

  const Coords& y = omega.coords();
  std::vector<Form::RawTerm> raw;
  for (const auto& [mi, a] : omega.terms()) {
    const Expr w = homotopy_weighted(a, p, y);
    for (int j = 0; j < p; ++j) {
      std::vector<int> rest;
      for (int l = 0; l < p; ++l)
        if (l != j) rest.push_back(mi[l]);
      const Expr c = w * Expr::var(y[static_cast<std::size_t>(mi[j])]);
      raw.emplace_back(std::move(rest), j % 2 == 0 ? c : -c);
    }
  }
  return Form::from_terms(y, p - 1, std::move(raw));
}

TransformationResult attempt_degenerate_transformation(const EvolutionaryRelation& r,
                                                       const Pseudostructure& pi,
                                                       const ProbeOptions& options) {
  if (pi.ambient() != r.omega.coords())
    throw DimensionMismatch("pseudostructure does not live on the relation's space");
  Form omega_pi = pullback(pi, r.omega);
  Form residual = d_flat(omega_pi);
  TransformationResult out{std::nullopt, is_zero_form(residual, options), residual, ""};
  if (out.closure != ZeroTest::Zero) {
    out.diagnostic = out.closure == ZeroTest::NonZero
                         ? "restricted form is not closed"
                         : "closure of the restricted form is undetermined";
    return out;
  }
  std::optional<Form> theta;
  if (omega_pi.degree() > 0) {
    try {
      theta = poincare_antiderivative(omega_pi, options);
    } catch (const UnsupportedClass& e) {
      out.diagnostic = e.what();
      return out;
    }
  }
  out.relation = IdenticalRelation{pi, r.psi, std::move(omega_pi), std::move(theta)};
  return out;
}

IntegrationChain sequential_integration(const EvolutionaryRelation& r,
                                        const std::vector<Pseudostructure>& pis,
                                        const ProbeOptions& options) {
  IntegrationChain chain;
  EvolutionaryRelation current = r;
  for (std::size_t stage = 0;; ++stage) {
    const int k = current.degree();
    if (k == 0) {
      chain.stages.push_back({0, IdenticalRelation{Pseudostructure::identity(current.omega.coords()),
                                                   current.psi, current.omega, std::nullopt}});
      chain.complete = true;
      return chain;
    }
    if (stage >= pis.size()) {
      chain.diagnostic = "no pseudostructure supplied for stage " + std::to_string(stage + 1) +
                         " (degree " + std::to_string(k) + ")";
      return chain;
    }
    TransformationResult res = attempt_degenerate_transformation(current, pis[stage], options);
    if (!res.ok()) {
      chain.diagnostic = "stage " + std::to_string(stage + 1) + ": " + res.diagnostic;
      chain.residual = std::move(res.residual);
      return chain;
    }
    IdenticalRelation& rel = *res.relation;
    Form next = *rel.theta;
    const Coords params = rel.pi.params();
    chain.stages.push_back({k, std::move(rel)});
    current = relation_from_form(current.psi, std::move(next), Manifold(params));
  }
}

std::vector<SelfvariationStep> run_selfvariation(BalanceSystem b, const Selfvariation& hook,
                                                 int max_steps, const ProbeOptions& options) {
  std::vector<SelfvariationStep> steps;
  for (int step = 0; step < max_steps; ++step) {
    const EvolutionaryRelation r = build_relation(b);
    steps.push_back({step, nonidentity_check(r, options), r.commutator.total});
    if (!hook) break;
    auto next = hook(step, r);
    if (!next) break;
    b.A = std::move(*next);
  }
  return steps;
}

std::vector<RelationOutcome> relation_batch_serial(const std::vector<BalanceSystem>& systems,
                                                   const ProbeOptions& options) {
  std::vector<RelationOutcome> out(systems.size());
  for (std::size_t i = 0; i < systems.size(); ++i) {
    try {
      out[i].verdict = nonidentity_check(build_relation(systems[i]), options);
    } catch (const std::exception& e) {
      out[i].error = e.what();
    }
  }
  return out;
}

std::vector<RelationOutcome> relation_batch(const std::vector<BalanceSystem>& systems,
                                            const ProbeOptions& options) {
  std::vector<RelationOutcome> out(systems.size());
  const long count = static_cast<long>(systems.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < count; ++i) {
    const auto u = static_cast<std::size_t>(i);
    try {
      out[u].verdict = nonidentity_check(build_relation(systems[u]), options);
    } catch (const std::exception& e) {
      out[u].error = e.what();
    }
  }
  return out;
}

}  // namespace formcalc
