#pragma once

#include <optional>
#include <string>
#include <vector>

#include "signedcrowd/spectral.hpp"
#include "signedcrowd/types.hpp"

namespace signedcrowd {

struct OpinionState {
  Vector x;
  long k = 0;  // inner time
  long s = 1;  // discussion index
};

/// Closed-form equilibrium of a (DT or CT) model and its social power.
struct EquilibriumResult {
  Vector x_star;
  Vector social_power;
  Aggregator aggregator = Aggregator::kPopulation;
  /// Coefficient of zeta in E[aggregated x*].
  double mean_factor = 1.0;
  Partite partite = Partite::kUnipartite;
  /// Right dominant signature (all ones for unipartite models).
  Vector signature;
  /// x* = propagator * x0.
  Matrix propagator;
  std::vector<std::string> warnings;
};

OpinionState step_degroot(const InteractionMatrix& w, const OpinionState& state);

OpinionState step_sfj(const InteractionMatrix& w, const StubbornnessProfile& theta,
                      const OpinionState& state, const Vector& x0);

/// Closed-form equilibrium. Checks the model's assumptions first (throws
/// kAssumptionViolated), rejects an all-zero Theta for SFJ/concatenated
/// models (kDegenerateStubbornness) and propagates kSingularMatrix.
EquilibriumResult equilibrium(const ModelKind& kind, const InteractionMatrix& w,
                              const std::optional<StubbornnessProfile>& theta,
                              const Vector& x0, Aggregator aggregator);

/// Detects the partite class from the certificate of W (SPF/EP or SSPF).
std::optional<Partite> detect_partite(const InteractionMatrix& w);

struct SimulationOptions {
  long max_steps = 1'000'000;        // inner K_max
  double inner_tol = 1e-10;
  long max_discussions = 10'000;
  double outer_tol = 1e-10;
  /// Run the concatenated inner FJ loops by iteration instead of x = P x.
  bool iterate_inner = false;
  /// Return the partial trajectory instead of throwing kNoConvergence.
  bool allow_partial = false;
};

struct Trajectory {
  std::vector<OpinionState> states;
  bool converged = false;
  double residual = 0.0;
};

/// Iterates the model from x0. DeGroot/SFJ record every inner step k; the
/// concatenated model records x(s, 0) for each discussion s.
Trajectory simulate(const ModelKind& kind, const InteractionMatrix& w,
                    const std::optional<StubbornnessProfile>& theta, const Vector& x0,
                    const SimulationOptions& options = {});

/// Social power vector and mean factor shared by the DT and CT closed forms.
/// `consensus_left` is z (DeGroot) or p (concatenated), `propagator` is P.
EquilibriumResult assemble_equilibrium(Dynamics dynamics, Partite partite,
                                       const Vector& signature,
                                       const std::optional<Vector>& consensus_left,
                                       const std::optional<Matrix>& propagator,
                                       const Vector& x0, Aggregator aggregator);

}  // namespace signedcrowd
