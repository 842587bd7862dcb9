#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "signedcrowd/dynamics_ct.hpp"
#include "signedcrowd/dynamics_dt.hpp"
#include "signedcrowd/wisdom.hpp"

namespace signedcrowd {

enum class Distribution { kGaussian, kUniformMatched };

std::string_view to_string(Distribution d);
std::optional<Distribution> parse_distribution(std::string_view text);

struct SampleConfig {
  long trials = 100'000;
  std::uint64_t seed = 0;
  Distribution distribution = Distribution::kGaussian;
  BeliefModel belief;
  /// Worker threads; 0 uses the hardware concurrency. Results do not depend on it.
  unsigned threads = 0;
};

/// Seed of the generator for trial block `block` (1024 trials each),
/// derived from the run seed by splitmix64 mixing.
std::uint64_t block_seed(std::uint64_t seed, std::uint64_t block);

/// trials x n draws with mean zeta 1 and covariance Sigma.
Matrix sample_initial(const SampleConfig& config);

struct EmpiricalResult {
  double mean_hat = 0.0;
  double var_hat = 0.0;
  /// 99% half-width of the variance estimate (normal approximation, fourth moment plug-in).
  double ci_halfwidth = 0.0;
  /// 99% half-width of the mean estimate.
  double mean_ci_halfwidth = 0.0;
  double analytic_mean = 0.0;
  double analytic_var = 0.0;
  long trials = 0;
  std::uint64_t seed = 0;

  bool mean_within_ci() const;
  bool var_within_ci() const;
};

/// Statistics of weights^T x(0) over the sampled x(0).
EmpiricalResult empirical_linear(const SampleConfig& config, const Vector& weights);

/// Pushes every draw through the closed-form equilibrium and aggregates it.
EmpiricalResult empirical_wisdom(const SampleConfig& config, const ModelKind& kind,
                                 const InteractionMatrix& w,
                                 const std::optional<StubbornnessProfile>& theta,
                                 Aggregator aggregator);

EmpiricalResult empirical_wisdom(const SampleConfig& config, const CTModelSpec& spec,
                                 Aggregator aggregator);

EmpiricalResult empirical_wisdom(const SampleConfig& config, const EquilibriumResult& eq);

struct VarianceRow {
  long s = 1;
  double var_start = 0.0;  // Var[xbar(s, 0)]
  double var_end = 0.0;    // Var[xbar(s, inf)]
};

struct VarianceTrajectory {
  double initial = 0.0;
  std::vector<VarianceRow> rows;
  double limit = 0.0;
};

/// Analytic variance over `discussions` concatenated discussions: the
/// covariance after s discussions is P^s Sigma P^s^T. The first start value
/// is the population average of x(0).
VarianceTrajectory variance_trajectory(const ModelKind& kind, const InteractionMatrix& w,
                                       const StubbornnessProfile& theta,
                                       const BeliefModel& belief, long discussions,
                                       Aggregator aggregator = Aggregator::kPopulation);

VarianceTrajectory variance_trajectory(const CTModelSpec& spec, const BeliefModel& belief,
                                       long discussions,
                                       Aggregator aggregator = Aggregator::kPopulation);

}  // namespace signedcrowd
