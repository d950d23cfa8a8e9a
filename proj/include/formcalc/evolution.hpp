#pragma once

// Balance conservation laws and the evolutionary relation d(psi) = omega they
// produce: nonidentity check, degenerate transformation into an identical
// relation on a pseudostructure, antiderivatives and sequential integration.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "formcalc/forms.hpp"
#include "formcalc/manifold.hpp"
#include "formcalc/pseudostructure.hpp"

namespace formcalc {

struct BalanceSystem {
  Coords coords;         // xi^1 is the along-trajectory coordinate
  std::vector<Expr> A;   // action coefficients A_mu
  std::string psi = "psi";
  std::optional<Manifold> manifold;
};

struct EvolutionaryRelation {
  std::string psi;
  Form omega;
  Manifold space;
  CommutatorReport commutator;

  int degree() const { return omega.degree(); }
};

/// omega = sum A_mu dxi^mu with its commutator on the attached manifold (flat
/// when none). Throws DimensionMismatch on arity or coordinate mismatch.
EvolutionaryRelation build_relation(const BalanceSystem& b);

/// A relation whose right-hand side is supplied directly, for any degree.
EvolutionaryRelation relation_from_form(std::string psi, Form omega, Manifold space);

enum class Identity { Identical, Nonidentical, Undetermined };
std::string_view to_string(Identity v);

/// Identical iff every commutator component is Zero.
Identity nonidentity_check(const EvolutionaryRelation& r, const ProbeOptions& options = {});

struct CommutatorDecomposition {
  Form quantum_term;      // from the coefficients
  Form deformation_term;  // from the deforming basis
};
CommutatorDecomposition commutator_decomposition(const EvolutionaryRelation& r);

struct IdenticalRelation {
  Pseudostructure pi;
  std::string psi;
  Form omega_pi;               // closed on the parameter space
  std::optional<Form> theta;   // d_flat(theta) = omega_pi; absent in degree 0
};

struct TransformationResult {
  std::optional<IdenticalRelation> relation;
  ZeroTest closure = ZeroTest::NonZero;
  Form residual;  // d_pi(omega); zero on success
  std::string diagnostic;

  bool ok() const { return relation.has_value(); }
};

/// Restricts omega to `pi`; on closure also integrates it. `r` is never
/// modified. Throws DimensionMismatch when `pi` does not live on r's space.
TransformationResult attempt_degenerate_transformation(const EvolutionaryRelation& r,
                                                       const Pseudostructure& pi,
                                                       const ProbeOptions& options = {});

/// Homotopy operator centred at the origin: a monomial of coordinate degree m
/// in a p-form coefficient is weighted by 1/(p + m). Names that are not
/// coordinates are constants. Throws NotClosed, InvalidArgument on 0-forms and
/// UnsupportedClass when a coefficient is not polynomial in the coordinates.
Form poincare_antiderivative(const Form& omega, const ProbeOptions& options = {});

struct IntegrationStage {
  int k;
  IdenticalRelation relation;
};

struct IntegrationChain {
  std::vector<IntegrationStage> stages;
  bool complete = false;  // reached k = 0
  std::string diagnostic;
  std::optional<Form> residual;
};

/// Stage j restricts the current relation to pis[j] and replaces its right
/// side by the antiderivative, lowering the degree by one. A degree-0 right
/// side ends the chain with a final k = 0 stage.
IntegrationChain sequential_integration(const EvolutionaryRelation& r,
                                        const std::vector<Pseudostructure>& pis,
                                        const ProbeOptions& options = {});

/// Called between checks; returns the next coefficients or nullopt to stop.
using Selfvariation = std::function<std::optional<std::vector<Expr>>(
    int step, const EvolutionaryRelation& current)>;

struct SelfvariationStep {
  int step;
  Identity verdict;
  Form commutator;
};

std::vector<SelfvariationStep> run_selfvariation(BalanceSystem b, const Selfvariation& hook,
                                                 int max_steps,
                                                 const ProbeOptions& options = {});

struct RelationOutcome {
  Identity verdict = Identity::Undetermined;
  std::string error;
};

/// Builds and checks each system, one task per system.
std::vector<RelationOutcome> relation_batch(const std::vector<BalanceSystem>& systems,
                                            const ProbeOptions& options = {});

/// Reference implementation of `relation_batch` on one thread.
std::vector<RelationOutcome> relation_batch_serial(const std::vector<BalanceSystem>& systems,
                                                   const ProbeOptions& options = {});

}  // namespace formcalc
