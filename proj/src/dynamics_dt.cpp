#include "signedcrowd/dynamics_dt.hpp"

#include <fmt/format.h>

#include "signedcrowd/error.hpp"

namespace signedcrowd {

OpinionState step_degroot(const InteractionMatrix& w, const OpinionState& state) {
  require_same_size(w.size(), state.x.size(), "opinion state");
  return {w.entries() * state.x, state.k + 1, state.s};
}

OpinionState step_sfj(const InteractionMatrix& w, const StubbornnessProfile& theta,
                      const OpinionState& state, const Vector& x0) {
  require_same_size(w.size(), state.x.size(), "opinion state");
  require_same_size(w.size(), theta.size(), "stubbornness");
  require_same_size(w.size(), x0.size(), "initial opinions");
  const auto& t = theta.values();
  Vector next = (1.0 - t.array()).matrix().asDiagonal() * (w.entries() * state.x);
  next += t.cwiseProduct(x0);
  return {std::move(next), state.k + 1, state.s};
}

std::optional<Partite> detect_partite(const InteractionMatrix& w) {
  const SpectralCertificate cert = dominant_eigenpair(w);
  if (cert.satisfies_spf()) return Partite::kUnipartite;
  if (cert.satisfies_sspf()) return Partite::kBipartite;
  return std::nullopt;
}

EquilibriumResult assemble_equilibrium(Dynamics dynamics, Partite partite,
                                       const Vector& signature,
                                       const std::optional<Vector>& consensus_left,
                                       const std::optional<Matrix>& propagator,
                                       const Vector& x0, Aggregator aggregator) {
  const Index n = signature.size();
  require_same_size(n, x0.size(), "initial opinions");

  EquilibriumResult result;
  result.partite = partite;
  result.signature = signature;
  result.aggregator = aggregator;
  if (partite == Partite::kUnipartite && aggregator == Aggregator::kBipartition) {
    result.warnings.emplace_back(
        "bipartition aggregator has no effect on a unipartite model; using population");
    result.aggregator = Aggregator::kPopulation;
  }
  const bool group = result.aggregator == Aggregator::kBipartition;

  if (dynamics == Dynamics::kSFJ) {
    const Matrix& p = *propagator;
    result.propagator = p;
    result.x_star = p * x0;
    result.social_power = group ? Vector(p.transpose() * signature / double(n))
                                : Vector(p.transpose() * Vector::Ones(n) / double(n));
    result.mean_factor = result.social_power.sum();
    return result;
  }

  const Vector& y = *consensus_left;
  result.social_power = y;
  result.propagator = signature * y.transpose();
  result.x_star = y.dot(x0) * signature;
  if (partite == Partite::kBipartite && !group) {
    result.mean_factor = signature.sum() * y.sum() / double(n);
  } else {
    result.mean_factor = y.sum();
  }
  return result;
}

namespace {

void require_nondegenerate_theta(const ModelKind& kind,
                                 const std::optional<StubbornnessProfile>& theta) {
  if (kind.dynamics == Dynamics::kDeGroot) return;
  if (!theta) {
    throw Error(ErrorCode::kInvalidArgument, "stubbornness profile required");
  }
  if (theta->all_zero()) {
    throw Error(ErrorCode::kDegenerateStubbornness,
                "Theta = 0 gives P = 0; use the DeGroot model instead");
  }
}

}  // namespace

EquilibriumResult equilibrium(const ModelKind& kind, const InteractionMatrix& w,
                              const std::optional<StubbornnessProfile>& theta,
                              const Vector& x0, Aggregator aggregator) {
  require_same_size(w.size(), x0.size(), "initial opinions");
  require_nondegenerate_theta(kind, theta);
  const AssumptionReport report = check_assumptions(kind, w, theta);
  require_assumptions(report);

  const Vector signature = report.base->signature()->values();
  switch (kind.dynamics) {
    case Dynamics::kDeGroot:
      return assemble_equilibrium(kind.dynamics, kind.partite, signature,
                                  report.base->z_left, std::nullopt, x0, aggregator);
    case Dynamics::kSFJ:
      return assemble_equilibrium(kind.dynamics, kind.partite, signature, std::nullopt,
                                  fj_propagator(w.entries(), *theta), x0, aggregator);
    case Dynamics::kConcatSFJ:
      return assemble_equilibrium(kind.dynamics, kind.partite, signature,
                                  report.propagator->z_left,
                                  fj_propagator(w.entries(), *theta), x0, aggregator);
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown dynamics");
}

namespace {

Trajectory finish(Trajectory traj, const SimulationOptions& options, std::string_view what) {
  if (!traj.converged && !options.allow_partial) {
    throw Error(ErrorCode::kNoConvergence,
                fmt::format("{} stopped after {} states with residual {:.3e}", what,
                            traj.states.size(), traj.residual));
  }
  return traj;
}

// Iterates an inner loop x <- step(x) until the sup-norm increment drops
// below tol. Returns the number of steps taken.
template <typename Step>
long run_inner(Vector& x, long max_steps, double tol, double& residual, Step&& step,
               std::vector<OpinionState>* record, long s) {
  residual = std::numeric_limits<double>::infinity();
  for (long k = 1; k <= max_steps; ++k) {
    Vector next = step(x);
    residual = (next - x).cwiseAbs().maxCoeff();
    x = std::move(next);
    if (record) record->push_back({x, k, s});
    if (residual < tol) return k;
  }
  return max_steps;
}

}  // namespace

Trajectory simulate(const ModelKind& kind, const InteractionMatrix& w,
                    const std::optional<StubbornnessProfile>& theta, const Vector& x0,
                    const SimulationOptions& options) {
  require_same_size(w.size(), x0.size(), "initial opinions");
  require_nondegenerate_theta(kind, theta);
  require_assumptions(check_assumptions(kind, w, theta));

  const Index n = w.size();
  Trajectory traj;
  traj.states.push_back({x0, 0, 1});
  Vector x = x0;

  if (kind.dynamics == Dynamics::kDeGroot) {
    const Matrix& m = w.entries();
    run_inner(x, options.max_steps, options.inner_tol, traj.residual,
              [&](const Vector& cur) { return Vector(m * cur); }, &traj.states, 1);
    traj.converged = traj.residual < options.inner_tol;
    return finish(std::move(traj), options, "DeGroot iteration");
  }

  const Vector& t = theta->values();
  const Matrix damped = (Vector::Ones(n) - t).asDiagonal() * w.entries();

  if (kind.dynamics == Dynamics::kSFJ) {
    const Vector anchor = t.cwiseProduct(x0);
    run_inner(x, options.max_steps, options.inner_tol, traj.residual,
              [&](const Vector& cur) { return Vector(damped * cur + anchor); }, &traj.states,
              1);
    traj.converged = traj.residual < options.inner_tol;
    return finish(std::move(traj), options, "SFJ iteration");
  }

  // Concatenated: x(s+1, 0) = x(s, inf).
  const Matrix p = fj_propagator(w.entries(), *theta);
  traj.residual = std::numeric_limits<double>::infinity();
  for (long s = 1; s <= options.max_discussions; ++s) {
    Vector next;
    if (options.iterate_inner) {
      next = x;
      const Vector anchor = t.cwiseProduct(x);
      double inner_residual = 0.0;
      run_inner(next, options.max_steps, options.inner_tol, inner_residual,
                [&](const Vector& cur) { return Vector(damped * cur + anchor); }, nullptr, s);
      if (inner_residual >= options.inner_tol) {
        traj.residual = inner_residual;
        return finish(std::move(traj), options, fmt::format("discussion {} inner loop", s));
      }
    } else {
      next = p * x;
    }
    traj.residual = (next - x).cwiseAbs().maxCoeff();
    x = std::move(next);
    traj.states.push_back({x, 0, s + 1});
    if (traj.residual < options.outer_tol) {
      traj.converged = true;
      break;
    }
  }
  return finish(std::move(traj), options, "concatenated discussions");
}

}  // namespace signedcrowd
