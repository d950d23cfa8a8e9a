#include <random>

#include "doctest.h"
#include "formcalc/error.hpp"
#include "formcalc/evolution.hpp"
#include "formcalc/parse.hpp"
#include "support.hpp"

using namespace formcalc;
using namespace formcalc::testing;

namespace {

const Coords xi{"xi1", "xi2"};
const Coords t1{"t"};

BalanceSystem balance(const char* a1, const char* a2) {
  return {xi, {parse_expr(a1), parse_expr(a2)}, "psi", std::nullopt};
}

Form F(const char* text, const Coords& coords) { return parse_form(text, coords); }

Pseudostructure curve(const char* x1, const char* x2) {
  return Pseudostructure(t1, xi, {parse_expr(x1), parse_expr(x2)});
}

Manifold twisted(const Expr& c) {
  std::vector<Expr> g(8, Expr(0L));
  g[(0 * 2 + 1) * 2 + 0] = c;  // Gamma^1_{21}
  return Manifold(xi, Connection(2, std::move(g)));
}

}  // namespace

TEST_CASE("relations from balance systems") {
  const auto grad = build_relation(balance("xi2", "xi1"));
  CHECK(grad.commutator.total.is_zero());
  CHECK(nonidentity_check(grad) == Identity::Identical);

  const auto rot = build_relation(balance("xi2", "-xi1"));
  CHECK(rot.omega == F("(xi2) dxi1 - (xi1) dxi2", xi));
  CHECK(rot.commutator.total == F("-2 dxi1^dxi2", xi));
  CHECK(nonidentity_check(rot) == Identity::Nonidentical);

  const auto shear = build_relation(balance("xi2", "0"));
  CHECK(shear.commutator.total == F("-1 dxi1^dxi2", xi));

  CHECK(nonidentity_check(build_relation(balance("3", "-1/2"))) == Identity::Identical);
  CHECK_THROWS_AS(build_relation({xi, {Expr(1L)}, "psi", std::nullopt}), DimensionMismatch);
}

TEST_CASE("gradient fields give identical relations") {
  std::mt19937_64 rng(51);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + trial % 4;
    const Coords x = default_coords(n, "xi");
    const DensePoly psi0 = random_dense_poly(rng, x, 4, 4);
    BalanceSystem b{x, {}, "psi", std::nullopt};
    for (std::size_t i = 0; i < x.size(); ++i) b.A.push_back(psi0.derivative(i).to_raw_expr(rng));
    CHECK(nonidentity_check(build_relation(b)) == Identity::Identical);
  }
}

TEST_CASE("commutator decomposition") {
  const auto flat = commutator_decomposition(build_relation(balance("xi2", "-xi1")));
  CHECK(flat.quantum_term == F("-2 dxi1^dxi2", xi));
  CHECK(flat.deformation_term.is_zero());

  BalanceSystem b = balance("a1", "a2");
  b.manifold = twisted(Expr::var("c"));
  const auto dec = commutator_decomposition(build_relation(b));
  CHECK(dec.quantum_term.is_zero());
  CHECK(dec.deformation_term == F("(c*a1) dxi1^dxi2", xi));
}

TEST_CASE("commutator agrees with a finite-difference curl") {
  std::mt19937_64 rng(52);
  for (int trial = 0; trial < 20; ++trial) {
    const Expr a1 = random_poly(rng, xi, 3, 3) + sin(random_poly(rng, xi, 1, 2));
    const Expr a2 = random_poly(rng, xi, 3, 3) * exp(Expr::var("xi1") / Expr(Rational(3)));
    const auto r = build_relation({xi, {a1, a2}, "psi", std::nullopt});
    const Expr k12 = r.commutator.total.coefficient(MultiIndex({0, 1}));
    const Point pt = random_point(rng, xi);
    const double curl = central_difference(a2, pt, "xi1") - central_difference(a1, pt, "xi2");
    const double value = k12.is_literal_zero() ? 0.0 : to_double(eval_at(k12, pt));
    CHECK(close_rel(value, curl, 1e-6));
  }
}

TEST_CASE("degenerate transformation on the constant-xi2 line") {
  const auto r = build_relation(balance("xi2", "0"));
  const CommutatorReport before = r.commutator;
  const auto res = attempt_degenerate_transformation(r, curve("t", "c0"));
  REQUIRE(res.ok());
  CHECK(res.closure == ZeroTest::Zero);
  CHECK(res.relation->omega_pi == F("(c0) dt", t1));
  REQUIRE(res.relation->theta);
  CHECK(*res.relation->theta == Form::scalar(t1, parse_expr("c0*t")));
  CHECK(r.commutator.total == before.total);
  CHECK(r.commutator.coefficient_term == before.coefficient_term);
  CHECK(r.commutator.metric_term == before.metric_term);
  CHECK(nonidentity_check(r) == Identity::Nonidentical);
}

TEST_CASE("degenerate transformation fixtures") {
  const auto rot = build_relation(balance("xi2", "-xi1"));
  const auto diag = attempt_degenerate_transformation(rot, curve("t", "t"));
  REQUIRE(diag.ok());
  CHECK(diag.relation->omega_pi.is_zero());
  CHECK(diag.relation->theta->is_zero());

  const auto grad = build_relation(balance("xi2", "xi1"));
  const auto whole = attempt_degenerate_transformation(grad, Pseudostructure::identity(xi));
  REQUIRE(whole.ok());
  CHECK(*whole.relation->theta == Form::scalar(xi, parse_expr("xi1*xi2")));

  const auto fail = attempt_degenerate_transformation(rot, Pseudostructure::identity(xi));
  CHECK_FALSE(fail.ok());
  CHECK(fail.closure == ZeroTest::NonZero);
  CHECK(fail.residual == F("-2 dxi1^dxi2", xi));
  CHECK_FALSE(fail.diagnostic.empty());

  CHECK_THROWS_AS(attempt_degenerate_transformation(rot, Pseudostructure::identity(default_coords(2))),
                  DimensionMismatch);
}

TEST_CASE("Poincare antiderivative fixtures") {
  const Coords x = default_coords(2);
  CHECK(poincare_antiderivative(F("2 dx1", x)) == Form::scalar(x, parse_expr("2*x1")));
  const Form theta = poincare_antiderivative(F("dx1^dx2", x));
  CHECK(theta == F("(-x2/2) dx1 + (x1/2) dx2", x));
  CHECK(d_flat(theta) == F("dx1^dx2", x));
  CHECK(poincare_antiderivative(F("(c) dx1", x)) == Form::scalar(x, parse_expr("c*x1")));
  CHECK_THROWS_AS(poincare_antiderivative(F("(x2) dx1", x)), NotClosed);
  CHECK_THROWS_AS(poincare_antiderivative(F("(cos(x1)) dx1", x)), UnsupportedClass);
  CHECK_THROWS_AS(poincare_antiderivative(Form::scalar(x, Expr(1L))), InvalidArgument);
}

TEST_CASE("homotopy round trip on random exact forms") {
  std::mt19937_64 rng(53);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 1 + trial % 4;
    const Coords x = default_coords(n);
    const int p = static_cast<int>(rng() % static_cast<unsigned>(std::min(n, 3)));
    const Form omega = d_flat(random_form(rng, x, p));
    CHECK(d_flat(poincare_antiderivative(omega)) == omega);
  }
}

TEST_CASE("sequential integration") {
  const auto r = build_relation(balance("xi2", "0"));
  const IntegrationChain chain = sequential_integration(r, {curve("t", "c0")});
  CHECK(chain.complete);
  REQUIRE(chain.stages.size() == 2);
  CHECK(chain.stages[0].k == 1);
  CHECK(chain.stages[1].k == 0);
  CHECK(chain.stages[1].relation.omega_pi == Form::scalar(t1, parse_expr("c0*t")));

  const Coords x = default_coords(2);
  const auto two = relation_from_form("psi", F("dx1^dx2", x), Manifold(x));
  const Pseudostructure diag(t1, x, {Expr::var("t"), Expr::var("t")});
  const IntegrationChain c2 = sequential_integration(two, {Pseudostructure::identity(x), diag});
  CHECK(c2.complete);
  REQUIRE(c2.stages.size() == 3);
  CHECK(c2.stages[0].k == 2);
  CHECK(c2.stages[1].k == 1);
  CHECK(c2.stages[2].k == 0);

  const IntegrationChain short_chain = sequential_integration(two, {Pseudostructure::identity(x)});
  CHECK_FALSE(short_chain.complete);
  CHECK(short_chain.stages.size() == 1);
  CHECK(short_chain.diagnostic.find("stage 2") != std::string::npos);

  const auto grad = build_relation(balance("xi2", "xi1"));
  const IntegrationChain id = sequential_integration(grad, {Pseudostructure::identity(xi)});
  CHECK(id.complete);
  CHECK(id.stages.back().relation.omega_pi == Form::scalar(xi, parse_expr("xi1*xi2")));

  const auto rot = build_relation(balance("xi2", "-xi1"));
  const IntegrationChain failed = sequential_integration(rot, {Pseudostructure::identity(xi)});
  CHECK(failed.stages.empty());
  CHECK_FALSE(failed.complete);
  REQUIRE(failed.residual);
  CHECK(*failed.residual == F("-2 dxi1^dxi2", xi));
}

TEST_CASE("selfvariation hook") {
  const auto hook = [](int step, const EvolutionaryRelation&) -> std::optional<std::vector<Expr>> {
    if (step == 0) return std::vector<Expr>{parse_expr("xi2"), Expr(0L)};
    if (step == 1) return std::vector<Expr>{parse_expr("xi2"), parse_expr("xi1")};
    return std::nullopt;
  };
  const auto steps = run_selfvariation(balance("xi2", "-xi1"), hook, 10);
  REQUIRE(steps.size() == 3);
  CHECK(steps[0].commutator == F("-2 dxi1^dxi2", xi));
  CHECK(steps[1].commutator == F("-1 dxi1^dxi2", xi));
  CHECK(steps[1].verdict == Identity::Nonidentical);
  CHECK(steps[2].verdict == Identity::Identical);
  CHECK(run_selfvariation(balance("xi2", "-xi1"), nullptr, 5).size() == 1);
  CHECK(run_selfvariation(balance("xi2", "-xi1"), hook, 2).size() == 2);
}

TEST_CASE("batch relation check matches the serial reference") {
  std::mt19937_64 rng(54);
  std::vector<BalanceSystem> systems;
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 2;
    const Coords x = default_coords(n, "xi");
    BalanceSystem b{x, {}, "psi", std::nullopt};
    for (int i = 0; i < n; ++i) b.A.push_back(random_poly(rng, x, 2, 2));
    systems.push_back(std::move(b));
  }
  systems.push_back({xi, {Expr(1L)}, "psi", std::nullopt});
  const auto par = relation_batch(systems);
  const auto ser = relation_batch_serial(systems);
  REQUIRE(par.size() == ser.size());
  for (std::size_t i = 0; i < par.size(); ++i) {
    CHECK(par[i].verdict == ser[i].verdict);
    CHECK(par[i].error == ser[i].error);
  }
  CHECK_FALSE(par.back().error.empty());
}
