#pragma once

#include <optional>
#include <string_view>

namespace formcalc {

enum class Interaction { Strong, Weak, Electromagnetic, Gravitational };
std::string_view to_string(Interaction i);

struct StructureClass {
  int p;
  int k;
  int N;
  std::optional<int> n;  // carried as given
  int pseudostructure_dim;
  Interaction interaction;
};

/// Depends on k only.
Interaction interaction_for(int k);

/// Throws InvalidArgument unless 0 <= k <= p <= 3, N >= 1 and N >= k.
StructureClass classify(int p, int k, int N, std::optional<int> n = std::nullopt);

}  // namespace formcalc
