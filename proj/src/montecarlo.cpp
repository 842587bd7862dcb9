#include "signedcrowd/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <span>
#include <thread>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "signedcrowd/error.hpp"

namespace signedcrowd {

namespace {

constexpr double kZ99 = 2.5758293035489004;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Symmetric square root U diag(sqrt(max(lambda, 0))) U^T; fine for singular Sigma.
Matrix symmetric_root(const Matrix& sigma) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(sigma);
  const Vector root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * root.asDiagonal() * es.eigenvectors().transpose();
}

double pairwise_sum(std::span<const double> xs) {
  if (xs.size() <= 8) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

constexpr long kBlock = 1024;

template <typename Fn>
void parallel_for(long count, unsigned threads, Fn&& fn) {
  unsigned workers = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
  workers = unsigned(std::min<long>(workers, std::max(1L, count)));
  if (workers <= 1) {
    fn(0L, count);
    return;
  }
  std::vector<std::thread> pool;
  const long chunk = (count + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const long begin = long(w) * chunk;
    const long end = std::min(count, begin + chunk);
    if (begin >= end) break;
    pool.emplace_back([&fn, begin, end] { fn(begin, end); });
  }
  for (auto& t : pool) t.join();
}

void require_config(const SampleConfig& config) {
  if (config.trials < 2) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("trials must be >= 2, got {}", config.trials));
  }
}

}  // namespace

std::string_view to_string(Distribution d) {
  return d == Distribution::kGaussian ? "gaussian" : "uniform";
}

std::optional<Distribution> parse_distribution(std::string_view text) {
  if (text == "gaussian") return Distribution::kGaussian;
  if (text == "uniform") return Distribution::kUniformMatched;
  return std::nullopt;
}

std::uint64_t block_seed(std::uint64_t seed, std::uint64_t block) {
  return splitmix64(splitmix64(seed) ^ block);
}

Matrix sample_initial(const SampleConfig& config) {
  require_config(config);
  const Index n = config.belief.size();
  const Matrix root = symmetric_root(config.belief.sigma());
  const double zeta = config.belief.zeta();
  const double half_width = std::sqrt(3.0);
  Matrix draws(config.trials, n);

  // One generator per fixed block of trials, so the draws do not depend on
  // how blocks are spread over threads.
  const long blocks = (config.trials + kBlock - 1) / kBlock;
  parallel_for(blocks, config.threads, [&](long first, long last) {
    Vector g(n);
    for (long block = first; block < last; ++block) {
      std::mt19937_64 rng(block_seed(config.seed, std::uint64_t(block)));
      std::normal_distribution<double> normal(0.0, 1.0);
      std::uniform_real_distribution<double> uniform(-half_width, half_width);
      const long end = std::min(config.trials, (block + 1) * kBlock);
      for (long trial = block * kBlock; trial < end; ++trial) {
        if (config.distribution == Distribution::kGaussian) {
          for (Index i = 0; i < n; ++i) g(i) = normal(rng);
        } else {
          for (Index i = 0; i < n; ++i) g(i) = uniform(rng);
        }
        draws.row(trial) = (Vector::Constant(n, zeta) + root * g).transpose();
      }
    }
  });
  return draws;
}

bool EmpiricalResult::mean_within_ci() const {
  return std::abs(mean_hat - analytic_mean) <= mean_ci_halfwidth + 1e-12 * std::max(1.0, std::abs(analytic_mean));
}

bool EmpiricalResult::var_within_ci() const {
  return std::abs(var_hat - analytic_var) <= ci_halfwidth + 1e-12 * std::max(1.0, analytic_var);
}

EmpiricalResult empirical_linear(const SampleConfig& config, const Vector& weights) {
  require_same_size(config.belief.size(), weights.size(), "aggregation weights");
  const Matrix draws = sample_initial(config);
  const long trials = config.trials;
  std::vector<double> values(static_cast<std::size_t>(trials));
  for (long k = 0; k < trials; ++k) values[std::size_t(k)] = draws.row(k).dot(weights);

  const double nt = double(trials);
  const double mean = pairwise_sum(values) / nt;
  std::vector<double> sq(values.size()), quart(values.size());
  for (std::size_t k = 0; k < values.size(); ++k) {
    const double d = values[k] - mean;
    sq[k] = d * d;
    quart[k] = sq[k] * sq[k];
  }
  const double m2 = pairwise_sum(sq) / nt;
  const double m4 = pairwise_sum(quart) / nt;

  EmpiricalResult r;
  r.trials = trials;
  r.seed = config.seed;
  r.mean_hat = mean;
  r.var_hat = m2 * nt / (nt - 1.0);
  const double var_of_var = (m4 - r.var_hat * r.var_hat * (nt - 3.0) / (nt - 1.0)) / nt;
  r.ci_halfwidth = kZ99 * std::sqrt(std::max(0.0, var_of_var));
  r.mean_ci_halfwidth = kZ99 * std::sqrt(r.var_hat / nt);
  r.analytic_mean = config.belief.zeta() * weights.sum();
  r.analytic_var = weights.dot(config.belief.sigma() * weights);
  return r;
}

EmpiricalResult empirical_wisdom(const SampleConfig& config, const EquilibriumResult& eq) {
  const Index n = eq.signature.size();
  const Vector agg = eq.aggregator == Aggregator::kBipartition ? Vector(eq.signature / double(n))
                                                               : Vector(Vector::Ones(n) / double(n));
  // xbar* = agg^T (M x0) for the equilibrium propagator M.
  return empirical_linear(config, eq.propagator.transpose() * agg);
}

EmpiricalResult empirical_wisdom(const SampleConfig& config, const ModelKind& kind,
                                 const InteractionMatrix& w,
                                 const std::optional<StubbornnessProfile>& theta,
                                 Aggregator aggregator) {
  const Vector x0 = Vector::Constant(w.size(), config.belief.zeta());
  return empirical_wisdom(config, equilibrium(kind, w, theta, x0, aggregator));
}

EmpiricalResult empirical_wisdom(const SampleConfig& config, const CTModelSpec& spec,
                                 Aggregator aggregator) {
  const Vector x0 = Vector::Constant(spec.size(), config.belief.zeta());
  return empirical_wisdom(config, ct_equilibrium(spec, x0, aggregator));
}

namespace {

VarianceTrajectory propagate(const Matrix& p, const EquilibriumResult& eq,
                             const BeliefModel& belief, long discussions) {
  if (discussions < 0) throw Error(ErrorCode::kInvalidArgument, "discussions must be >= 0");
  const Index n = p.rows();
  require_same_size(n, belief.size(), "belief model");
  const Vector agg = eq.aggregator == Aggregator::kBipartition ? Vector(eq.signature / double(n))
                                                               : Vector(Vector::Ones(n) / double(n));
  const Matrix& sigma = belief.sigma();
  auto variance = [&](const Vector& g) { return g.dot(sigma * g); };

  VarianceTrajectory traj;
  traj.initial = initial_group_variance(belief);
  // g_s = (P^s)^T agg, so Var[agg^T P^s x0] = g_s^T Sigma g_s.
  Vector g = agg;
  for (long s = 1; s <= discussions; ++s) {
    VarianceRow row;
    row.s = s;
    row.var_start = s == 1 ? traj.initial : variance(g);
    g = p.transpose() * g;
    row.var_end = variance(g);
    traj.rows.push_back(row);
  }
  traj.limit = variance(eq.propagator.transpose() * agg);
  return traj;
}

}  // namespace

VarianceTrajectory variance_trajectory(const ModelKind& kind, const InteractionMatrix& w,
                                       const StubbornnessProfile& theta,
                                       const BeliefModel& belief, long discussions,
                                       Aggregator aggregator) {
  if (kind.dynamics != Dynamics::kConcatSFJ) {
    throw Error(ErrorCode::kInvalidArgument, "variance trajectory needs the concatenated model");
  }
  const Vector x0 = Vector::Constant(w.size(), belief.zeta());
  const EquilibriumResult eq = equilibrium(kind, w, theta, x0, aggregator);
  return propagate(fj_propagator(w.entries(), theta), eq, belief, discussions);
}

VarianceTrajectory variance_trajectory(const CTModelSpec& spec, const BeliefModel& belief,
                                       long discussions, Aggregator aggregator) {
  if (spec.kind != Dynamics::kConcatSFJ) {
    throw Error(ErrorCode::kInvalidArgument, "variance trajectory needs the concatenated model");
  }
  const Vector x0 = Vector::Constant(spec.size(), belief.zeta());
  const EquilibriumResult eq = ct_equilibrium(spec, x0, aggregator);
  return propagate(ct_fj_propagator(spec.l.entries(), *spec.theta), eq, belief, discussions);
}

}  // namespace signedcrowd
