// Acceptance suite: one pass/fail line per criterion.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "formcalc/classify.hpp"
#include "formcalc/cli.hpp"
#include "formcalc/evolution.hpp"
#include "formcalc/hodge.hpp"
#include "formcalc/parse.hpp"
#include "support.hpp"

using namespace formcalc;
using namespace formcalc::testing;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
  int failures = 0;

  void check(bool ok, const std::string& what) {
    if (ok) return;
    if (failures++ < 3) detail += (detail.empty() ? "" : "; ") + what;
    pass = false;
  }
};

int sign_pow(int e) { return e % 2 == 0 ? 1 : -1; }

DensePoly constant(const Coords& vars, const Rational& c) {
  DensePoly p(vars);
  p.add(std::vector<int>(vars.size(), 0), c);
  return p;
}

Outcome exterior_algebra_laws() {
  Outcome o;
  std::mt19937_64 rng(1001);
  int cases = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 4;
    const Coords x = default_coords(n);
    std::uniform_int_distribution<int> deg(0, std::min(n, 3));
    const int pa = deg(rng), pb = deg(rng), pc = deg(rng);
    const Form a = random_form(rng, x, pa, 3);
    const Form b = random_form(rng, x, pb, 3);
    const Form c = random_form(rng, x, pc, 3);
    const std::string tag = " (trial " + std::to_string(trial) + ")";
    o.check(d_flat(d_flat(a)).is_zero(), "d d != 0" + tag);
    const Form ab = wedge(a, b);
    const Form ba = wedge(b, a);
    o.check(ab == (sign_pow(pa * pb) > 0 ? ba : negate(ba)), "anticommutativity" + tag);
    const Form dab = add(wedge(d_flat(a), b),
                         sign_pow(pa) > 0 ? wedge(a, d_flat(b)) : negate(wedge(a, d_flat(b))));
    o.check(d_flat(ab) == dab, "Leibniz" + tag);
    o.check(wedge(ab, c) == wedge(a, wedge(b, c)), "associativity" + tag);
    if (pa + pb <= n) {
      const Point pt = random_point(rng, x);
      const Vectors v = random_vectors(rng, pa + pb, n);
      o.check(close_rel(form_on_vectors(ab, pt, v), wedge_oracle(a, b, pt, v), 1e-9),
              "wedge differs from the shuffle formula" + tag);
    }
    ++cases;
  }
  o.detail = o.pass ? std::to_string(cases) + " random triples, n <= 4, p <= 3" : o.detail;
  return o;
}

Outcome commutator_oracle() {
  Outcome o;
  std::mt19937_64 rng(1002);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + trial % 3;
    const Coords x = default_coords(n);
    std::vector<DensePoly> a;
    std::vector<DensePoly> gamma;
    std::vector<Expr> gamma_expr;
    std::vector<Form::RawTerm> raw;
    for (int i = 0; i < n; ++i) {
      a.push_back(random_dense_poly(rng, x, 3, 3));
      raw.push_back({{i}, a.back().to_raw_expr(rng)});
    }
    for (int e = 0; e < n * n * n; ++e) {
      gamma.push_back(rng() % 3 == 0 ? DensePoly(x) : random_dense_poly(rng, x, 1, 2));
      gamma_expr.push_back(gamma.back().terms.empty() ? Expr(0L) : gamma.back().to_raw_expr(rng));
    }
    auto G = [&](int s, int b, int al) -> const DensePoly& {
      return gamma[static_cast<std::size_t>((s * n + b) * n + al)];
    };
    const Manifold m(x, Connection(n, gamma_expr));
    const Form theta = Form::from_terms(x, 1, raw);
    const CommutatorReport rep = commutator(m, theta);
    for (int al = 0; al < n; ++al) {
      for (int be = al + 1; be < n; ++be) {
        const auto ual = static_cast<std::size_t>(al), ube = static_cast<std::size_t>(be);
        DensePoly k = a[ube].derivative(ual) + constant(x, -1) * a[ual].derivative(ube);
        for (int s = 0; s < n; ++s)
          k = k + (G(s, be, al) + constant(x, -1) * G(s, al, be)) * a[static_cast<std::size_t>(s)];
        const Expr got = rep.total.coefficient(MultiIndex({al, be}));
        for (int probe = 0; probe < 3; ++probe) {
          const Point pt = random_point(rng, x);
          const Rational v = got.is_literal_zero() ? Rational(0) : std::get<Rational>(eval_at(got, pt));
          o.check(v == k.eval(pt), "K mismatch in trial " + std::to_string(trial));
        }
      }
    }
  }
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 3;
    const Coords x = default_coords(n);
    const Manifold m(x, random_connection(rng, n, true));
    const Form theta = random_form(rng, x, 1);
    o.check(commutator(m, theta).total == d_flat(theta), "symmetric connection deforms");
    o.check(commutator(m, theta).metric_term.is_zero(), "symmetric connection has torsion");
  }
  if (o.pass) o.detail = "50 random pairs against the expanded formula; 20 symmetric connections flat";
  return o;
}

Outcome nonclosure_witness() {
  Outcome o;
  const Coords x = default_coords(2);
  std::vector<Expr> g(8, Expr(0L));
  g[(0 * 2 + 1) * 2 + 0] = Expr::var("c");  // Gamma^1_{21} = c
  const Manifold m(x, Connection(2, g));
  const Form once = d_evolutionary(m, Form::scalar(x, Expr::var("x1")));
  const Form twice = d_evolutionary(m, once);
  o.check(twice == parse_form("(c) dx1^dx2", x), "unexpected d_evo d_evo x1: " + twice.str());
  o.check(is_zero_form(twice) == ZeroTest::NonZero, "d_evo d_evo x1 vanishes");
  if (o.pass) o.detail = "torsion c: d_evo(d_evo x1) = " + twice.str();
  return o;
}

Outcome pullback_naturality() {
  Outcome o;
  std::mt19937_64 rng(1004);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 2 + trial % 3;
    const int k = 1 + static_cast<int>(rng() % static_cast<unsigned>(n));
    const Pseudostructure pi = random_immersion(rng, k, n);
    const int p = static_cast<int>(rng() % static_cast<unsigned>(n));
    const Form theta = random_form(rng, pi.ambient(), p);
    o.check(pullback(pi, d_flat(theta)) == d_flat(pullback(pi, theta)),
            "pullback d != d pullback in trial " + std::to_string(trial));
  }
  if (o.pass) o.detail = "100 random (pi, theta) pairs, exact";
  return o;
}

Outcome homotopy_round_trip() {
  Outcome o;
  std::mt19937_64 rng(1005);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + trial % 4;
    const Coords x = default_coords(n);
    const int p = static_cast<int>(rng() % static_cast<unsigned>(std::min(n, 3)));
    const Form omega = d_flat(random_form(rng, x, p));
    o.check(d_flat(poincare_antiderivative(omega)) == omega,
            "round trip fails in trial " + std::to_string(trial));
  }
  if (o.pass) o.detail = "50 random exact forms";
  return o;
}

Outcome hodge_laws() {
  Outcome o;
  std::mt19937_64 rng(1006);
  int star_cases = 0;
  for (int n = 0; n <= 4; ++n) {
    const Manifold m = Manifold::euclidean(n);
    for (int p = 0; p <= n; ++p) {
      for (int trial = 0; trial < 3; ++trial) {
        const Form a = random_form(rng, m.coords(), p);
        const Form ss = star(m, star(m, a));
        o.check(ss == (sign_pow(p * (n - p)) > 0 ? a : negate(a)),
                "** sign at n=" + std::to_string(n) + " p=" + std::to_string(p));
        ++star_cases;
      }
    }
  }
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + trial % 3;
    const Manifold m = Manifold::euclidean(n);
    const int p = 2 + static_cast<int>(rng() % static_cast<unsigned>(n - 1));
    const Form a = random_form(rng, m.coords(), p);
    o.check(codifferential(m, codifferential(m, a)).is_zero(),
            "delta delta != 0 in trial " + std::to_string(trial));
  }
  // Oracle: sum of second derivatives on the dense exponent table.
  const Coords x = default_coords(2);
  DensePoly f(x);
  f.add({2, 0}, 1);
  f.add({0, 2}, 1);
  const DensePoly lap = f.derivative(0).derivative(0) + f.derivative(1).derivative(1);
  const Rational expected = lap.eval({{"x1", 0}, {"x2", 0}});
  const Form got = laplacian(Manifold::euclidean(2), Form::scalar(x, parse_expr("x1^2 + x2^2")));
  const Expr value = got.coefficient(MultiIndex());
  o.check(value.is_const() && abs(value.value()) == abs(expected) && expected == 4,
          "Laplacian of x1^2 + x2^2 is " + got.str());
  if (o.pass)
    o.detail = std::to_string(star_cases) + " star cases, 50 delta cases, Laplacian " + value.str();
  return o;
}

Outcome degenerate_pipeline() {
  Outcome o;
  const Coords xi{"xi1", "xi2"};
  const Coords t{"t"};
  const auto r = build_relation({xi, {parse_expr("xi2"), Expr(0L)}, "psi", std::nullopt});
  const CommutatorReport before = r.commutator;
  const Pseudostructure line(t, xi, {Expr::var("t"), Expr::var("c0")});
  const auto res = attempt_degenerate_transformation(r, line);
  o.check(res.ok(), "transformation failed: " + res.diagnostic);
  if (res.ok()) {
    o.check(res.relation->theta &&
                *res.relation->theta == Form::scalar(t, parse_expr("c0*t")),
            "theta differs from c0*t");
  }
  o.check(r.commutator.total == before.total && r.commutator.metric_term == before.metric_term &&
              r.commutator.coefficient_term == before.coefficient_term,
          "commutator changed");
  o.check(nonidentity_check(r) == Identity::Nonidentical, "relation no longer nonidentical");
  if (o.pass)
    o.detail = "theta = " + res.relation->theta->str() + " on xi2 = c0; commutator " +
               r.commutator.total.str() + " unchanged";
  return o;
}

Outcome numeric_cross_validation() {
  Outcome o;
  std::mt19937_64 rng(1008);
  const Coords xi{"xi1", "xi2"};
  const Expr a1 = parse_expr("xi1^2*xi2 - 3*xi2^3 + sin(xi1 - 2*xi2)");
  const Expr a2 = parse_expr("exp(xi1/3)*(xi1*xi2 + 1) + cos(xi2)");
  const auto r = build_relation({xi, {a1, a2}, "psi", std::nullopt});
  const Expr k12 = r.commutator.total.coefficient(MultiIndex({0, 1}));
  double worst = 0;
  for (int i = 0; i < 20; ++i) {
    const Point pt = random_point(rng, xi);
    const double curl = central_difference(a2, pt, "xi1") - central_difference(a1, pt, "xi2");
    const double value = to_double(eval_at(k12, pt));
    const double rel = std::abs(value - curl) / std::max({1.0, std::abs(value), std::abs(curl)});
    worst = std::max(worst, rel);
    o.check(close_rel(value, curl, 1e-6), "point " + std::to_string(i));
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "20 points, worst relative error %.2e", worst);
  if (o.pass) o.detail = buf;
  return o;
}

Outcome classification_table() {
  Outcome o;
  const std::vector<std::pair<int, std::string>> rows{
      {0, "strong"}, {1, "weak"}, {2, "electromagnetic"}, {3, "gravitational"}};
  for (const auto& [k, name] : rows) {
    for (int p = k; p <= 3; ++p) {
      for (int N = std::max(1, k); N <= 6; ++N) {
        const StructureClass c = classify(p, k, N);
        o.check(std::string(to_string(c.interaction)) == name, "k=" + std::to_string(k));
        o.check(c.pseudostructure_dim == N - k, "dim for N=" + std::to_string(N));
      }
    }
  }
  const StructureClass em = classify(3, 2, 4);
  o.check(em.interaction == Interaction::Electromagnetic && em.pseudostructure_dim == 2,
          "(3,2,4) is not electromagnetic with dimension 2");
  if (o.pass) o.detail = "k = 0..3 -> strong, weak, electromagnetic, gravitational; dim = N - k";
  return o;
}

struct Invocation {
  std::vector<std::string> args;
  int code;
};

std::pair<int, std::string> invoke(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str()};
}

bool valid_record(const std::string& line) {
  const auto doc = nlohmann::json::parse(line, nullptr, false);
  if (doc.is_discarded() || !doc.is_object() || doc.size() != 4) return false;
  for (const char* key : {"command", "inputs", "result", "status"})
    if (!doc.contains(key)) return false;
  static const std::set<std::string> statuses{"ok", "closure-failed", "error"};
  if (!doc["status"].is_string() || !statuses.count(doc["status"].get<std::string>()))
    return false;
  return doc["inputs"].is_object() && doc["result"].is_object() &&
         (doc["status"] == "error") == doc["result"].contains("error");
}

Outcome cli_contract() {
  Outcome o;
  const std::string data = FORMCALC_DATA_DIR;

  std::ifstream corpus(data + "/roundtrip.txt");
  int cases = 0;
  std::string line;
  while (std::getline(corpus, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> parts;
    std::stringstream ss(line);
    std::string part;
    while (std::getline(ss, part, '|')) {
      const auto b = part.find_first_not_of(' ');
      const auto e = part.find_last_not_of(' ');
      parts.push_back(b == std::string::npos ? "" : part.substr(b, e - b + 1));
    }
    ++cases;
    try {
      if (parts[0] == "form") {
        Coords coords;
        std::stringstream cs(parts[1]);
        std::string c;
        while (std::getline(cs, c, ',')) coords.push_back(c);
        const Form f = parse_form(parts[2], coords);
        const Form g = parse_form(f.str(), coords);
        o.check(f == g && f.str() == g.str(), "form round trip: " + parts[2]);
        const auto [code, out] = invoke({"d", "--form", parts[2], "--coords", parts[1], "--json"});
        const auto doc = nlohmann::json::parse(out);
        o.check(code == 0 && parse_form(doc["inputs"]["form"].get<std::string>(), coords) == f,
                "CLI echo: " + parts[2]);
        o.check(parse_form(doc["result"]["form"].get<std::string>(), coords) == d_flat(f),
                "CLI result: " + parts[2]);
      } else {
        const Expr e = simplify(parse_expr(parts[1]));
        const Expr g = simplify(parse_expr(e.str()));
        o.check(e == g && e.str() == g.str(), "expr round trip: " + parts[1]);
      }
    } catch (const std::exception& ex) {
      o.check(false, "corpus line '" + line + "': " + ex.what());
    }
  }
  o.check(cases == 30, "corpus has " + std::to_string(cases) + " cases");

  const std::vector<Invocation> table{
      {{"d", "--form", "(x1) dx2", "--dim", "2"}, 0},
      {{"classify", "-p", "3", "-k", "2", "-N", "4"}, 0},
      {{"relation", "--balance", data + "/rotation.json"}, 0},
      {{"transform", "--balance", data + "/shear.json", "--pseudo", data + "/line_c0.json"}, 0},
      {{"closure", "--form", "(x2) dx1", "--dim", "2"}, 1},
      {{"transform", "--balance", data + "/rotation.json", "--pseudo", data + "/identity.json"}, 1},
      {{"integrate", "--form", "(x2) dx1", "--dim", "2"}, 1},
      {{"integrate", "--form", "(cos(x1)) dx1", "--dim", "1"}, 1},
      {{"d", "--form", "(x1 dx2", "--dim", "2"}, 2},
      {{"d", "--form", "dy1", "--dim", "2"}, 2},
      {{"d", "--form", "dx1"}, 2},
      {{"frobnicate"}, 2},
      {{}, 2},
      {{"classify", "-p", "1", "-k", "2", "-N", "4"}, 2},
      {{"laplacian", "--form", "(x1)", "--dim", "2", "--variant", "other"}, 2},
      {{"relation", "--balance", data + "/missing.json"}, 2},
      {{"star", "--form", "dx1", "--dim", "2", "--metric", "file"}, 2},
  };
  for (const auto& inv : table) {
    std::vector<std::string> args = inv.args;
    args.push_back("--json");
    const auto [code, out] = invoke(args);
    std::string shown;
    for (const auto& a : inv.args) shown += a + " ";
    o.check(code == inv.code, "exit " + std::to_string(code) + " for '" + shown + "'");
    o.check(valid_record(out), "invalid record for '" + shown + "'");
  }

  const auto rel = nlohmann::json::parse(
      invoke({"relation", "--balance", data + "/rotation.json", "--json"}).second);
  o.check(rel["result"]["verdict"] == "Nonidentical" &&
              rel["result"]["components"]["xi1,xi2"] == "-2",
          "relation fixture");
  const auto cls = nlohmann::json::parse(
      invoke({"classify", "-p", "3", "-k", "2", "-N", "4", "--json"}).second);
  o.check(cls["result"]["interaction"] == "electromagnetic" &&
              cls["result"]["pseudostructure_dim"] == 2,
          "classify fixture");

  const std::vector<std::vector<std::string>> repeated{
      {"locus", "--expr", "sin(x*y) - y/3", "--seed", "77", "--json"},
      {"closure", "--form", "(exp(x1*x2)) dx1", "--dim", "2", "--seed", "5", "--json"},
      {"commutator", "--form", "(xi1) dxi1", "--manifold", data + "/twisted.json", "--seed", "9",
       "--json"},
      {"integrate", "--form", "dx1^dx2^dx3", "--dim", "3", "--json"},
      {"locus", "--expr", "6*x^3*y - 6*x^3", "--seed", "1"},
  };
  for (const auto& args : repeated) {
    const auto first = invoke(args);
    const auto second = invoke(args);
    o.check(first == second, "output differs between runs of " + args[0]);
  }
  if (o.pass)
    o.detail = std::to_string(cases) + " round-trip cases, " + std::to_string(table.size()) +
               " exit-code cases, " + std::to_string(repeated.size()) + " determinism cases";
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"exterior-algebra laws", exterior_algebra_laws},
      {"commutator against the expanded formula", commutator_oracle},
      {"evolutionary nonclosure witness", nonclosure_witness},
      {"pullback naturality", pullback_naturality},
      {"homotopy round trip", homotopy_round_trip},
      {"Hodge laws", hodge_laws},
      {"degenerate-transformation pipeline", degenerate_pipeline},
      {"numeric cross-validation", numeric_cross_validation},
      {"classification table", classification_table},
      {"CLI contract", cli_contract},
  };
  int passed = 0;
  int index = 0;
  for (const auto& [name, run] : criteria) {
    ++index;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("threw: ") + e.what();
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s  %2d  %-42s %s (%.2fs)\n", o.pass ? "PASS" : "FAIL", index, name,
                o.detail.c_str(), secs);
    if (o.pass) ++passed;
  }
  std::printf("%d/%zu criteria passed\n", passed, criteria.size());
  return passed == static_cast<int>(criteria.size()) ? 0 : 1;
}
