#include "formcalc/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "formcalc/parse.hpp"

namespace formcalc {
namespace {

using nlohmann::json;

json parse_document(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Expr expr_of(const json& v, const std::string& where) {
  if (v.is_string()) return simplify(parse_expr(v.get<std::string>()));
  if (v.is_number_integer()) return Expr(v.get<long>());
  if (v.is_number_float()) return simplify(parse_expr(v.dump()));
  throw ConfigError(where + ": expected an expression string or number");
}

Coords coords_of(const json& v, const std::string& where) {
  if (!v.is_array()) throw ConfigError(where + ": expected an array of names");
  Coords out;
  for (const auto& c : v) {
    if (!c.is_string()) throw ConfigError(where + ": expected an array of names");
    out.push_back(c.get<std::string>());
  }
  return out;
}

const json& require(const json& doc, const char* key, const std::string& what) {
  if (!doc.is_object()) throw ConfigError(what + ": expected a JSON object");
  auto it = doc.find(key);
  if (it == doc.end()) throw ConfigError(what + ": missing \"" + key + "\"");
  return *it;
}

Manifold manifold_from_doc(const json& doc) {
  const json& dim_v = require(doc, "dim", "manifold");
  if (!dim_v.is_number_integer() || dim_v.get<int>() < 1)
    throw ConfigError("manifold: \"dim\" must be a positive integer");
  const int n = dim_v.get<int>();
  const Coords coords =
      doc.contains("coords") ? coords_of(doc["coords"], "manifold.coords") : default_coords(n);
  if (static_cast<int>(coords.size()) != n)
    throw ConfigError("manifold: coords length differs from dim");

  std::optional<Connection> connection;
  if (doc.contains("gamma") && !doc["gamma"].is_null()) {
    const json& g = doc["gamma"];
    std::vector<Expr> entries;
    entries.reserve(static_cast<std::size_t>(n * n * n));
    if (!g.is_array() || static_cast<int>(g.size()) != n)
      throw ConfigError("manifold.gamma must be an n x n x n array");
    for (const auto& plane : g) {
      if (!plane.is_array() || static_cast<int>(plane.size()) != n)
        throw ConfigError("manifold.gamma must be an n x n x n array");
      for (const auto& row : plane) {
        if (!row.is_array() || static_cast<int>(row.size()) != n)
          throw ConfigError("manifold.gamma must be an n x n x n array");
        for (const auto& e : row) entries.push_back(expr_of(e, "manifold.gamma"));
      }
    }
    connection.emplace(n, std::move(entries));
  }

  std::optional<Metric> metric;
  if (doc.contains("metric") && !doc["metric"].is_null()) {
    const json& g = doc["metric"];
    if (!g.is_array() || static_cast<int>(g.size()) != n)
      throw ConfigError("manifold.metric must be an n x n array");
    std::vector<Expr> entries;
    for (const auto& row : g) {
      if (!row.is_array() || static_cast<int>(row.size()) != n)
        throw ConfigError("manifold.metric must be an n x n array");
      for (const auto& e : row) entries.push_back(expr_of(e, "manifold.metric"));
    }
    metric.emplace(ExprMatrix(n, std::move(entries)));
  }
  return Manifold(coords, std::move(connection), std::move(metric));
}

}  // namespace

Manifold manifold_from_json(std::string_view text) {
  return manifold_from_doc(parse_document(text));
}

Manifold load_manifold(const std::filesystem::path& path) {
  return manifold_from_json(read_file(path));
}

Pseudostructure pseudostructure_from_json(std::string_view text, const Coords& ambient,
                                          const ProbeOptions& options) {
  const json doc = parse_document(text);
  const Coords params = coords_of(require(doc, "params", "pseudostructure"),
                                  "pseudostructure.params");
  const json& m = require(doc, "map", "pseudostructure");
  if (!m.is_object()) throw ConfigError("pseudostructure.map must be an object");
  const std::set<std::string> known(ambient.begin(), ambient.end());
  for (const auto& [key, value] : m.items()) {
    if (!known.count(key))
      throw ConfigError("pseudostructure.map: '" + key + "' is not an ambient coordinate");
  }
  std::vector<Expr> map;
  for (const auto& x : ambient) {
    auto it = m.find(x);
    if (it == m.end()) throw ConfigError("pseudostructure.map: no entry for '" + x + "'");
    map.push_back(expr_of(*it, "pseudostructure.map." + x));
  }
  return Pseudostructure(params, ambient, std::move(map), options);
}

Pseudostructure load_pseudostructure(const std::filesystem::path& path, const Coords& ambient,
                                     const ProbeOptions& options) {
  return pseudostructure_from_json(read_file(path), ambient, options);
}

BalanceSystem balance_from_json(std::string_view text, const std::filesystem::path& base_dir) {
  const json doc = parse_document(text);
  BalanceSystem b;
  b.coords = coords_of(require(doc, "coords", "balance"), "balance.coords");
  const json& a = require(doc, "A", "balance");
  if (!a.is_array()) throw ConfigError("balance.A must be an array");
  for (const auto& e : a) b.A.push_back(expr_of(e, "balance.A"));
  if (doc.contains("psi")) {
    if (!doc["psi"].is_string()) throw ConfigError("balance.psi must be a name");
    b.psi = doc["psi"].get<std::string>();
  }
  if (doc.contains("manifold") && !doc["manifold"].is_null()) {
    const json& m = doc["manifold"];
    if (m.is_string()) {
      std::filesystem::path p = m.get<std::string>();
      if (p.is_relative()) p = base_dir / p;
      b.manifold = load_manifold(p);
    } else {
      b.manifold = manifold_from_doc(m);
    }
  }
  return b;
}

BalanceSystem load_balance(const std::filesystem::path& path) {
  return balance_from_json(read_file(path), path.parent_path());
}

}  // namespace formcalc
