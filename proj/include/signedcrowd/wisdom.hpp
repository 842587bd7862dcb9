#pragma once

#include <optional>
#include <string>
#include <vector>

#include "signedcrowd/dynamics_ct.hpp"
#include "signedcrowd/dynamics_dt.hpp"
#include "signedcrowd/types.hpp"

namespace signedcrowd {

/// True value zeta and covariance Sigma of the initial opinions.
class BeliefModel {
 public:
  /// Sigma_ij = rho_ij sigma_i sigma_j; requires sigma2 > 0 and |rho_ij| < 1
  /// off the diagonal (the diagonal of rho is ignored).
  static BeliefModel from_correlations(double zeta, const Vector& sigma2, const Matrix& rho);
  static BeliefModel independent(double zeta, const Vector& sigma2);
  /// Any symmetric PSD Sigma with positive diagonal (singular allowed).
  static BeliefModel from_covariance(double zeta, Matrix sigma);
  /// Sigma = 0: every draw equals zeta.
  static BeliefModel point_mass(double zeta, Index n);

  double zeta() const noexcept { return zeta_; }
  const Matrix& sigma() const noexcept { return sigma_; }
  Index size() const noexcept { return sigma_.rows(); }
  bool is_diagonal() const;
  /// Standard deviations sigma_i.
  Vector std_devs() const;
  /// rho_ij = Sigma_ij / (sigma_i sigma_j), unit diagonal.
  Matrix correlations() const;

 private:
  BeliefModel(double zeta, Matrix sigma) : zeta_(zeta), sigma_(std::move(sigma)) {}
  double zeta_;
  Matrix sigma_;
};

enum class RegionLabel { kG1, kG2, kG3, kG4, kG5, kG6, kG7, kG8, kG9 };

std::string_view to_string(RegionLabel label);
std::optional<RegionLabel> parse_region_label(std::string_view text);

/// Gamma = {y : a^T y = t, y^T Sigma y <= c} (and y >= 0 when simplex).
struct RegionSpec {
  RegionLabel label = RegionLabel::kG2;
  Vector a;
  double t = 1.0;
  double c = 0.0;
  Matrix sigma;
  bool simplex = false;
  /// Group variance = prefactor^2 y^T Sigma y (1^T v / n for G3/G7, else 1).
  double prefactor = 1.0;
};

RegionSpec make_region(RegionLabel label, const BeliefModel& model,
                       const std::optional<Signature>& v = std::nullopt);

enum class RegionClass { kInterior, kBoundary, kExterior, kOffHyperplane };
std::string_view to_string(RegionClass c);

RegionClass classify(const Vector& y, const RegionSpec& region);

struct OptimalPoint {
  Vector y;
  /// min y^T Sigma y over the region's hyperplane (and simplex).
  double quad = 0.0;
  /// Group variance at y: prefactor^2 * quad.
  double var_star = 0.0;
};

/// Minimizer of y^T Sigma y on a^T y = t (nonnegative QP for G1, n <= 20).
/// Throws kSingularCovariance for singular Sigma.
OptimalPoint optimal_social_power(const RegionSpec& region);

struct PositivityReport {
  bool is_positive = false;
  Vector witness;  // Sigma^{-1} 1
  bool m_matrix_test = false;
  bool row_sum_test = false;
};

PositivityReport positivity_check(const BeliefModel& model);

struct KernelFeasibility {
  bool feasible = false;
  /// Kernel point on the hyperplane when feasible, else the minimum-variance
  /// point (pseudo-inverse solution).
  Vector y_star;
  double variance = 0.0;
  Matrix kernel;  // orthonormal basis, n x dim
};

KernelFeasibility kernel_feasibility(const BeliefModel& model, const Vector& a, double t);

struct RankOneStructure {
  bool matches = false;
  std::optional<Index> index;  // 0-based column
  std::optional<Matrix> b;
};

RankOneStructure rank_one_structure(const BeliefModel& model);

struct RegionRadius {
  bool nonempty = false;
  double r2 = 0.0;
};

RegionRadius region_radius(const RegionSpec& region);

/// (r2_k / r2_l)^((n - 1) / 2). Throws kEmptyRegion.
double volume_ratio(const RegionSpec& region_k, const RegionSpec& region_l);

struct SensitivityTarget {
  enum class Kind { kRho, kSigma } kind = Kind::kRho;
  Index i = 0;
  Index j = 1;  // unused for kSigma

  static SensitivityTarget rho(Index i, Index j) { return {Kind::kRho, i, j}; }
  static SensitivityTarget sigma(Index i) { return {Kind::kSigma, i, i}; }
};

/// d r^2 / d rho_ij or d r^2 / d sigma_i for a region with a = 1, t = 1,
/// c = 1^T Sigma 1 / n^2.
double sensitivity(const RegionSpec& region, const SensitivityTarget& wrt);

double initial_group_variance(const BeliefModel& model);
double group_variance(const Vector& y, const BeliefModel& model, double prefactor = 1.0);

enum class MeanCase { kUnipartite, kBipartitePopConsensus, kBipartitePopSFJ, kBipartiteGroup };

struct MeanReport {
  double mean_value = 0.0;
  bool mean_accurate = false;
};

/// `v` is needed for kBipartitePopConsensus.
MeanReport mean_report(const Vector& y, const BeliefModel& model, MeanCase mean_case,
                       const std::optional<Signature>& v = std::nullopt);

enum class WisdomClass { kConcentrating, kNeutral, kDispersing };
std::string_view to_string(WisdomClass c);

WisdomClass compare_variances(double final_variance, double initial_variance);

struct WisdomReport {
  double mean_value = 0.0;
  bool mean_accurate = false;
  double initial_variance = 0.0;
  double final_variance = 0.0;
  WisdomClass classification = WisdomClass::kNeutral;
  RegionSpec region;
  RegionClass region_class = RegionClass::kExterior;
  RegionRadius radius;
  OptimalPoint optimum;
  /// True when the optimum came from the singular-covariance path.
  bool singular_covariance = false;
  /// |y - y*|_2.
  double optimum_gap = 0.0;
  EquilibriumResult equilibrium;
  std::vector<std::string> warnings;
};

/// Region label implied by (partite, aggregator, dynamics, Sigma diagonal).
RegionLabel select_region(const ModelKind& kind, Aggregator aggregator, bool diagonal_sigma);

WisdomReport wisdom_report(const ModelKind& kind, const InteractionMatrix& w,
                           const std::optional<StubbornnessProfile>& theta,
                           const BeliefModel& belief, Aggregator aggregator);

WisdomReport wisdom_report(const CTModelSpec& spec, const BeliefModel& belief,
                           Aggregator aggregator);

/// Report assembly from an already computed equilibrium.
WisdomReport wisdom_report(const ModelKind& kind, const EquilibriumResult& eq,
                           const BeliefModel& belief);

}  // namespace signedcrowd
