#include "formcalc/cli.hpp"

#include <functional>
#include <map>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "formcalc/classify.hpp"
#include "formcalc/config.hpp"
#include "formcalc/error.hpp"
#include "formcalc/evolution.hpp"
#include "formcalc/hodge.hpp"
#include "formcalc/parse.hpp"
#include "formcalc/pseudostructure.hpp"

namespace formcalc::cli {
namespace {

using nlohmann::json;

class UsageError : public Error {
 public:
  using Error::Error;
};

struct Options {
  std::vector<std::string> forms;
  std::vector<std::string> pseudo;
  std::vector<std::string> exprs;
  std::optional<int> dim;
  std::string coords;
  std::string manifold;
  std::string balance;
  std::string metric = "euclid";
  std::string variant = "standard";
  std::string vars;
  std::string pairs;
  std::uint64_t seed = ProbeOptions{}.seed;
  bool json = false;
  bool verbose = false;
  int p = 0;
  int k = 0;
  int N = 0;
  std::optional<int> n;
};

struct Report {
  std::string command;
  json inputs = json::object();
  json result = json::object();
  std::string status = "ok";
};

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  return s.substr(b, s.find_last_not_of(" \t") - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw UsageError("empty name in list '" + s + "'");
    out.push_back(item);
  }
  return out;
}

std::string join(const Coords& c) {
  std::string out;
  for (const auto& x : c) out += (out.empty() ? "" : ",") + x;
  return out;
}

ProbeOptions probe(const Options& o) {
  ProbeOptions p;
  p.seed = o.seed;
  return p;
}

std::string zero_name(ZeroTest z) { return std::string(to_string(z)); }

/// Coordinates and (optional) connection from --manifold, --coords or --dim.
Manifold space_of(const Options& o, Report& r) {
  std::optional<Manifold> from_file;
  if (!o.manifold.empty()) {
    from_file = load_manifold(o.manifold);
    r.inputs["manifold"] = o.manifold;
  }
  std::optional<Coords> coords;
  if (!o.coords.empty()) coords = split_list(o.coords);
  if (o.dim) {
    if (*o.dim < 1) throw UsageError("--dim must be positive");
    if (coords && static_cast<int>(coords->size()) != *o.dim)
      throw UsageError("--coords and --dim disagree");
    if (!coords) coords = default_coords(*o.dim);
  }
  if (from_file) {
    if (coords && *coords != from_file->coords())
      throw UsageError("coordinates differ from the manifold file");
    r.inputs["coords"] = join(from_file->coords());
    return *from_file;
  }
  if (!coords) throw UsageError("one of --dim, --coords or --manifold is required");
  r.inputs["coords"] = join(*coords);
  return Manifold(*coords);
}

/// The space with the metric selected by --metric.
Manifold metric_space_of(const Options& o, Report& r) {
  Manifold m = space_of(o, r);
  r.inputs["metric"] = o.metric;
  if (o.metric == "file") {
    if (o.manifold.empty()) throw UsageError("--metric file needs --manifold");
    if (!m.metric()) throw UsageError("manifold file has no metric");
    return m;
  }
  return Manifold(m.coords(), m.connection(), Metric::euclidean(m.dim()));
}

std::vector<Form> forms_of(const Options& o, const Coords& coords, Report& r) {
  std::vector<Form> out;
  json echo = json::array();
  for (const auto& text : o.forms) {
    out.push_back(parse_form(text, coords));
    echo.push_back(out.back().str());
  }
  if (out.size() == 1) {
    r.inputs["form"] = echo[0];
  } else {
    r.inputs["forms"] = echo;
  }
  return out;
}

Form single_form(const Options& o, const Coords& coords, Report& r) {
  if (o.forms.size() != 1) throw UsageError("exactly one --form is required");
  return forms_of(o, coords, r).front();
}

std::vector<Expr> exprs_of(const Options& o, Report& r) {
  std::vector<Expr> out;
  json echo = json::array();
  for (const auto& text : o.exprs) {
    out.push_back(simplify(parse_expr(text)));
    echo.push_back(out.back().str());
  }
  r.inputs["expr"] = echo;
  return out;
}

json components(const Form& f) {
  json out = json::object();
  for (const auto& [mi, c] : f.terms()) {
    std::string key;
    for (int i : mi.indices()) key += (key.empty() ? "" : ",") + f.coords()[static_cast<std::size_t>(i)];
    out[key] = c.str();
  }
  return out;
}

json identical_relation(const IdenticalRelation& rel) {
  json out = json::object();
  out["params"] = join(rel.pi.params());
  out["psi"] = rel.psi;
  out["omega"] = rel.omega_pi.str();
  out["theta"] = rel.theta ? json(rel.theta->str()) : json(nullptr);
  return out;
}

Pseudostructure load_pseudo(const std::string& path, const Coords& ambient, const Options& o) {
  return load_pseudostructure(path, ambient, probe(o));
}

using Handler = std::function<void(const Options&, Report&)>;

void cmd_wedge(const Options& o, Report& r) {
  if (o.forms.size() < 2) throw UsageError("wedge needs at least two --form");
  const Manifold m = space_of(o, r);
  const auto fs = forms_of(o, m.coords(), r);
  Form acc = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i) acc = wedge(acc, fs[i]);
  r.result["form"] = acc.str();
}

void cmd_d(const Options& o, Report& r) {
  const Manifold m = space_of(o, r);
  r.result["form"] = d_flat(single_form(o, m.coords(), r)).str();
}

void cmd_d_evo(const Options& o, Report& r) {
  const Manifold m = space_of(o, r);
  const Form theta = single_form(o, m.coords(), r);
  const Form flat = d_flat(theta);
  const Form evo = d_evolutionary(m, theta);
  r.result["form"] = evo.str();
  r.result["torsion_term"] = subtract(evo, flat).str();
}

void cmd_commutator(const Options& o, Report& r) {
  const Manifold m = space_of(o, r);
  const CommutatorReport c = commutator(m, single_form(o, m.coords(), r));
  r.result["total"] = c.total.str();
  r.result["coefficient_term"] = c.coefficient_term.str();
  r.result["metric_term"] = c.metric_term.str();
  r.result["components"] = components(c.total);
  r.result["verdict"] = zero_name(is_zero_form(c.total, probe(o)));
}

void cmd_closure(const Options& o, Report& r) {
  if (o.pseudo.size() > 1) throw UsageError("closure takes at most one --pseudo");
  const Manifold m = o.pseudo.empty() ? space_of(o, r) : metric_space_of(o, r);
  const Form theta = single_form(o, m.coords(), r);
  bool closed = false;
  if (o.pseudo.empty()) {
    const ZeroTest z = is_closed_flat(theta, probe(o));
    r.result["closure"] = zero_name(z);
    r.result["differential"] = d_flat(theta).str();
    closed = z == ZeroTest::Zero;
  } else {
    r.inputs["pseudo"] = o.pseudo.front();
    const Pseudostructure pi = load_pseudo(o.pseudo.front(), m.coords(), o);
    const DualClosure dc = defines_pseudostructure(m, pi, theta, probe(o));
    r.result["closure"] = zero_name(dc.form);
    r.result["dual_closure"] = zero_name(dc.dual);
    r.result["differential"] = d_pi(pi, theta).str();
    closed = dc.form == ZeroTest::Zero;
  }
  if (!closed) r.status = "closure-failed";
}

void cmd_star(const Options& o, Report& r) {
  const Manifold m = metric_space_of(o, r);
  r.result["form"] = star(m, single_form(o, m.coords(), r)).str();
}

void cmd_delta(const Options& o, Report& r) {
  const Manifold m = metric_space_of(o, r);
  r.result["form"] = codifferential(m, single_form(o, m.coords(), r)).str();
}

void cmd_laplacian(const Options& o, Report& r) {
  const Manifold m = metric_space_of(o, r);
  const Form theta = single_form(o, m.coords(), r);
  r.inputs["variant"] = o.variant;
  const auto v = o.variant == "paper" ? LaplacianVariant::Difference : LaplacianVariant::Standard;
  r.result["form"] = laplacian(m, theta, v).str();
}

void cmd_pullback(const Options& o, Report& r) {
  if (o.pseudo.size() != 1) throw UsageError("exactly one --pseudo is required");
  const Manifold m = space_of(o, r);
  const Form theta = single_form(o, m.coords(), r);
  r.inputs["pseudo"] = o.pseudo.front();
  const Pseudostructure pi = load_pseudo(o.pseudo.front(), m.coords(), o);
  r.result["params"] = join(pi.params());
  r.result["form"] = pullback(pi, theta).str();
}

void cmd_dpi(const Options& o, Report& r) {
  if (o.pseudo.size() != 1) throw UsageError("exactly one --pseudo is required");
  const Manifold m = space_of(o, r);
  const Form theta = single_form(o, m.coords(), r);
  r.inputs["pseudo"] = o.pseudo.front();
  const Pseudostructure pi = load_pseudo(o.pseudo.front(), m.coords(), o);
  const Form dp = d_pi(pi, theta);
  r.result["params"] = join(pi.params());
  r.result["form"] = dp.str();
  r.result["closure"] = zero_name(is_zero_form(dp, probe(o)));
}

void cmd_jacobian(const Options& o, Report& r) {
  if (o.exprs.empty()) throw UsageError("jacobian needs --expr for each component");
  if (o.vars.empty()) throw UsageError("jacobian needs --vars");
  const auto map = exprs_of(o, r);
  const Coords inputs = split_list(o.vars);
  r.inputs["vars"] = join(inputs);
  r.result["determinant"] = jacobian_determinant(map, inputs).str();
}

void cmd_poisson(const Options& o, Report& r) {
  if (o.exprs.size() != 2) throw UsageError("poisson needs exactly two --expr");
  if (o.pairs.empty()) throw UsageError("poisson needs --pairs q:p,...");
  const auto fg = exprs_of(o, r);
  std::vector<std::pair<std::string, std::string>> pairs;
  json echo = json::array();
  for (const auto& item : split_list(o.pairs)) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw UsageError("pair '" + item + "' is not q:p");
    pairs.emplace_back(trim(item.substr(0, colon)), trim(item.substr(colon + 1)));
    echo.push_back(pairs.back().first + ":" + pairs.back().second);
  }
  r.inputs["pairs"] = echo;
  r.result["bracket"] = poisson_bracket(fg[0], fg[1], pairs).str();
}

void cmd_locus(const Options& o, Report& r) {
  if (o.exprs.size() != 1) throw UsageError("locus needs exactly one --expr");
  const Expr e = exprs_of(o, r).front();
  const DegeneracyReport d = degenerate_locus(e, probe(o));
  r.result["exact"] = d.exact;
  r.result["note"] = d.note;
  if (d.exact) {
    r.result["unit"] = d.unit.get_str();
    json fs = json::array();
    for (const auto& f : d.factors)
      fs.push_back({{"factor", f.factor.str()}, {"multiplicity", f.multiplicity}});
    r.result["factors"] = fs;
  } else {
    json zs = json::array();
    for (const auto& z : d.sample_zeros) {
      json pt = json::object();
      for (const auto& [name, value] : z) {
        std::ostringstream ss;
        ss.precision(12);
        ss << value;
        pt[name] = ss.str();
      }
      zs.push_back(pt);
    }
    r.result["sample_zeros"] = zs;
  }
}

/// From --balance, or from a directly supplied right-hand side --form on the
/// space given by --manifold, --coords or --dim.
EvolutionaryRelation relation_of(const Options& o, Report& r) {
  if (o.balance.empty()) {
    if (o.forms.empty()) throw UsageError("--balance or --form is required");
    const Manifold m = space_of(o, r);
    return relation_from_form("psi", single_form(o, m.coords(), r), m);
  }
  if (!o.forms.empty()) throw UsageError("give either --balance or --form");
  r.inputs["balance"] = o.balance;
  const BalanceSystem b = load_balance(o.balance);
  json a = json::array();
  for (const auto& e : b.A) a.push_back(e.str());
  r.inputs["A"] = a;
  r.inputs["coords"] = join(b.coords);
  return build_relation(b);
}

void cmd_relation(const Options& o, Report& r) {
  const EvolutionaryRelation rel = relation_of(o, r);
  const CommutatorDecomposition dec = commutator_decomposition(rel);
  r.result["psi"] = rel.psi;
  r.result["omega"] = rel.omega.str();
  r.result["commutator"] = rel.commutator.total.str();
  r.result["components"] = components(rel.commutator.total);
  r.result["quantum_term"] = dec.quantum_term.str();
  r.result["deformation_term"] = dec.deformation_term.str();
  r.result["verdict"] = std::string(to_string(nonidentity_check(rel, probe(o))));
}

void cmd_transform(const Options& o, Report& r) {
  if (o.pseudo.size() != 1) throw UsageError("exactly one --pseudo is required");
  const EvolutionaryRelation rel = relation_of(o, r);
  r.inputs["pseudo"] = o.pseudo.front();
  const Pseudostructure pi = load_pseudo(o.pseudo.front(), rel.omega.coords(), o);
  const TransformationResult t = attempt_degenerate_transformation(rel, pi, probe(o));
  r.result["closure"] = zero_name(t.closure);
  r.result["residual"] = t.residual.str();
  r.result["commutator"] = rel.commutator.total.str();
  r.result["verdict"] = std::string(to_string(nonidentity_check(rel, probe(o))));
  if (t.ok()) {
    r.result["relation"] = identical_relation(*t.relation);
  } else {
    r.result["diagnostic"] = t.diagnostic;
    r.status = "closure-failed";
  }
}

void cmd_integrate(const Options& o, Report& r) {
  if (o.balance.empty() && o.pseudo.empty()) {
    const Manifold m = space_of(o, r);
    const Form omega = single_form(o, m.coords(), r);
    try {
      r.result["antiderivative"] = poincare_antiderivative(omega, probe(o)).str();
    } catch (const NotClosed& e) {
      r.result["diagnostic"] = e.what();
      r.status = "closure-failed";
    }
    return;
  }
  const std::optional<EvolutionaryRelation> rel = relation_of(o, r);
  if (o.pseudo.empty()) throw UsageError("integrate with --balance needs --pseudo");
  std::vector<Pseudostructure> pis;
  Coords ambient = rel->omega.coords();
  r.inputs["pseudo"] = o.pseudo;
  for (const auto& path : o.pseudo) {
    pis.push_back(load_pseudo(path, ambient, o));
    ambient = pis.back().params();
  }
  const IntegrationChain chain = sequential_integration(*rel, pis, probe(o));
  json stages = json::array();
  for (const auto& s : chain.stages) {
    json st = identical_relation(s.relation);
    st["k"] = s.k;
    stages.push_back(st);
  }
  r.result["stages"] = stages;
  r.result["complete"] = chain.complete;
  if (!chain.diagnostic.empty()) r.result["diagnostic"] = chain.diagnostic;
  if (chain.residual) r.result["residual"] = chain.residual->str();
  if (!chain.complete) r.status = "closure-failed";
}

void cmd_classify(const Options& o, Report& r) {
  r.inputs["p"] = o.p;
  r.inputs["k"] = o.k;
  r.inputs["N"] = o.N;
  if (o.n) r.inputs["n"] = *o.n;
  const StructureClass c = classify(o.p, o.k, o.N, o.n);
  r.result["p"] = c.p;
  r.result["k"] = c.k;
  r.result["N"] = c.N;
  r.result["n"] = c.n ? json(*c.n) : json(nullptr);
  r.result["pseudostructure_dim"] = c.pseudostructure_dim;
  r.result["interaction"] = std::string(to_string(c.interaction));
}

void flatten(const json& v, const std::string& key, std::ostream& os) {
  if (v.is_object() && !v.empty()) {
    for (const auto& [k, child] : v.items()) flatten(child, key + "." + k, os);
  } else if (v.is_array() && !v.empty()) {
    for (std::size_t i = 0; i < v.size(); ++i) flatten(v[i], key + "." + std::to_string(i), os);
  } else if (v.is_string()) {
    os << key << ": " << v.get<std::string>() << '\n';
  } else {
    os << key << ": " << v.dump() << '\n';
  }
}

json to_json(const Report& r) {
  return {{"command", r.command}, {"inputs", r.inputs}, {"result", r.result}, {"status", r.status}};
}

void write_text(const Report& r, std::ostream& os) {
  os << "command: " << r.command << '\n';
  flatten(r.inputs, "inputs", os);
  flatten(r.result, "result", os);
  os << "status: " << r.status << '\n';
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const UsageError*>(&e) || dynamic_cast<const ConfigError*>(&e) ||
      dynamic_cast<const ParseError*>(&e) || dynamic_cast<const InvalidArgument*>(&e) ||
      dynamic_cast<const DimensionMismatch*>(&e) || dynamic_cast<const DegreeMismatch*>(&e) ||
      dynamic_cast<const MissingConnection*>(&e) || dynamic_cast<const MissingMetric*>(&e) ||
      dynamic_cast<const UnboundVariable*>(&e) || dynamic_cast<const StructuralError*>(&e))
    return kExitUsage;
  if (dynamic_cast<const Error*>(&e)) return kExitNegative;
  return kExitUsage;
}

struct Command {
  const char* name;
  const char* help;
  Handler handler;
};

const std::vector<Command>& commands() {
  static const std::vector<Command> table{
      {"wedge", "wedge product of two or more forms", cmd_wedge},
      {"d", "exterior differential on flat space", cmd_d},
      {"d-evo", "evolutionary differential with the torsion term", cmd_d_evo},
      {"commutator", "coefficient and metric parts of the differential", cmd_commutator},
      {"closure", "closure on flat space or on a pseudostructure", cmd_closure},
      {"star", "Hodge star", cmd_star},
      {"delta", "codifferential", cmd_delta},
      {"laplacian", "Laplace-de Rham operator", cmd_laplacian},
      {"pullback", "restriction of a form to a pseudostructure", cmd_pullback},
      {"dpi", "differential of the restricted form", cmd_dpi},
      {"jacobian", "Jacobian determinant of a map", cmd_jacobian},
      {"poisson", "Poisson bracket", cmd_poisson},
      {"locus", "vanishing locus of a functional expression", cmd_locus},
      {"relation", "evolutionary relation of a balance system", cmd_relation},
      {"transform", "degenerate transformation onto a pseudostructure", cmd_transform},
      {"integrate", "antiderivative or sequential integration", cmd_integrate},
      {"classify", "(p, k, N) structure class", cmd_classify},
  };
  return table;
}

void add_space_options(CLI::App* sub, Options& o) {
  sub->add_option("--dim", o.dim, "dimension with coordinates x1..xn");
  sub->add_option("--coords", o.coords, "comma-separated coordinate names");
  sub->add_option("--manifold", o.manifold, "manifold config file");
}

void add_metric_options(CLI::App* sub, Options& o) {
  sub->add_option("--metric", o.metric, "euclid or file (metric from --manifold)")
      ->check(CLI::IsMember({"euclid", "file"}));
}

void configure(CLI::App& app, Options& o, std::map<std::string, Handler>& handlers) {
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--seed", o.seed, "probe seed for randomized zero tests");
  app.add_flag("--json", o.json, "single-line JSON report");
  app.add_flag("--verbose", o.verbose, "human-readable summary on stderr");

  for (const auto& c : commands()) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    handlers[c.name] = c.handler;
    const std::string name = c.name;
    if (name == "jacobian" || name == "poisson" || name == "locus") {
      sub->add_option("--expr", o.exprs, "expression (repeatable)");
      if (name == "jacobian") sub->add_option("--vars", o.vars, "comma-separated inputs");
      if (name == "poisson") sub->add_option("--pairs", o.pairs, "q1:p1,q2:p2,...");
      continue;
    }
    if (name == "classify") {
      sub->add_option("-p", o.p, "degree of the evolutionary form")->required();
      sub->add_option("-k", o.k, "degree of the closed form")->required();
      sub->add_option("-N", o.N, "dimension of the formed space")->required();
      sub->add_option("--n", o.n, "dimension of the original space");
      continue;
    }
    if (name == "relation" || name == "transform" || name == "integrate") {
      sub->add_option("--balance", o.balance, "balance system config file");
      if (name != "relation") sub->add_option("--pseudo", o.pseudo, "pseudostructure file");
      sub->add_option("--form", o.forms, "right-hand side given directly");
      add_space_options(sub, o);
      continue;
    }
    sub->add_option("--form", o.forms, "form (repeatable)");
    add_space_options(sub, o);
    if (name == "closure" || name == "pullback" || name == "dpi")
      sub->add_option("--pseudo", o.pseudo, "pseudostructure config file");
    if (name == "closure" || name == "star" || name == "delta" || name == "laplacian")
      add_metric_options(sub, o);
    if (name == "laplacian")
      sub->add_option("--variant", o.variant, "standard (d delta + delta d) or paper (d delta - delta d)")
          ->check(CLI::IsMember({"standard", "paper"}));
  }
}

int emit(const Report& r, const Options& o, std::ostream& out, std::ostream& err) {
  if (o.json) {
    out << to_json(r).dump() << '\n';
  } else {
    write_text(r, out);
  }
  if (o.verbose) {
    err << "formcalc " << r.command << ": " << r.status << '\n';
    for (const auto& [k, v] : r.result.items())
      err << "  " << k << " = " << (v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
  }
  if (r.status == "ok") return kExitOk;
  return kExitNegative;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Options o;
  std::map<std::string, Handler> handlers;
  CLI::App app{"Symbolic calculus of exterior and evolutionary differential forms", "formcalc"};
  configure(app, o, handlers);

  Report report;
  for (const auto& a : args) {
    if (handlers.count(a)) {
      report.command = a;
      break;
    }
  }
  for (const auto& a : args) {
    if (a == "--json") o.json = true;
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    report.status = "error";
    report.result["error"] = e.what();
    emit(report, o, out, err);
    err << "formcalc: " << e.what() << '\n';
    return kExitUsage;
  }

  const auto selected = app.get_subcommands();
  report.command = selected.front()->get_name();
  try {
    handlers.at(report.command)(o, report);
  } catch (const std::exception& e) {
    report.status = "error";
    report.result["error"] = e.what();
    emit(report, o, out, err);
    err << "formcalc " << report.command << ": " << e.what() << '\n';
    return exit_code_for(e);
  }
  return emit(report, o, out, err);
}

}  // namespace formcalc::cli
