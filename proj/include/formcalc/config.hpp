#pragma once

// JSON-shaped configuration files for manifolds, pseudostructures and
// balance systems. Expression entries are strings in the expression grammar;
// plain numbers are accepted too.
//
//   manifold:        { "dim": n, "coords": [...], "gamma": [s][b][a], "metric": [[...]] }
//   pseudostructure: { "params": [...], "map": { "x1": "expr", ... } }
//   balance:         { "coords": [...], "A": [...], "psi": "name", "manifold": "file" | {...} }
//
// gamma[s][b][a] is Gamma^s_{b a}. A relative manifold path inside a balance
// file is resolved against the balance file's directory.

#include <filesystem>
#include <string_view>

#include "formcalc/error.hpp"
#include "formcalc/evolution.hpp"
#include "formcalc/manifold.hpp"
#include "formcalc/pseudostructure.hpp"

namespace formcalc {

/// Malformed or inconsistent configuration document.
class ConfigError : public Error {
 public:
  using Error::Error;
};

Manifold manifold_from_json(std::string_view text);
Manifold load_manifold(const std::filesystem::path& path);

/// `ambient` fixes the order of the map; every ambient coordinate needs an
/// entry.
Pseudostructure pseudostructure_from_json(std::string_view text, const Coords& ambient,
                                          const ProbeOptions& options = {});
Pseudostructure load_pseudostructure(const std::filesystem::path& path, const Coords& ambient,
                                     const ProbeOptions& options = {});

BalanceSystem balance_from_json(std::string_view text,
                                const std::filesystem::path& base_dir = {});
BalanceSystem load_balance(const std::filesystem::path& path);

}  // namespace formcalc
