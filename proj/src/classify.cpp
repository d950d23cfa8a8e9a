#include "formcalc/classify.hpp"

#include <string>

#include "formcalc/error.hpp"

namespace formcalc {

std::string_view to_string(Interaction i) {
  switch (i) {
    case Interaction::Strong: return "strong";
    case Interaction::Weak: return "weak";
    case Interaction::Electromagnetic: return "electromagnetic";
    case Interaction::Gravitational: return "gravitational";
  }
  return "unknown";
}

Interaction interaction_for(int k) {
  switch (k) {
    case 0: return Interaction::Strong;
    case 1: return Interaction::Weak;
    case 2: return Interaction::Electromagnetic;
    case 3: return Interaction::Gravitational;
    default: throw InvalidArgument("closed-form degree k must lie in 0..3");
  }
}

StructureClass classify(int p, int k, int N, std::optional<int> n) {
  if (p < 0 || p > 3) throw InvalidArgument("evolutionary degree p must lie in 0..3");
  if (k < 0 || k > p) throw InvalidArgument("closed-form degree k must satisfy 0 <= k <= p");
  if (N < 1) throw InvalidArgument("space dimension N must be positive");
  if (N < k) throw InvalidArgument("pseudostructure dimension N - k would be negative");
  if (n && *n < 1) throw InvalidArgument("original space dimension n must be positive");
  return {p, k, N, n, N - k, interaction_for(k)};
}

}  // namespace formcalc
