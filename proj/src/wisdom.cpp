#include "signedcrowd/wisdom.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <fmt/format.h>

#include "signedcrowd/error.hpp"

namespace signedcrowd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kKernelRel = 1e-10;  // tau_ker and tau_psd, relative to lambda_max
constexpr Index kMaxSimplexSize = 20;

void validate_square(const Matrix& m, std::string_view what) {
  if (m.rows() != m.cols() || m.rows() < 2) {
    throw Error(ErrorCode::kInvalidBelief,
                fmt::format("{} must be square with n >= 2, got {}x{}", what, m.rows(), m.cols()));
  }
  if (!m.allFinite()) throw Error(ErrorCode::kInvalidBelief, fmt::format("{} is not finite", what));
}

Matrix symmetrized(const Matrix& m, std::string_view what) {
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = i + 1; j < m.cols(); ++j) {
      if (std::abs(m(i, j) - m(j, i)) > tol::kRow * scale) {
        throw Error(ErrorCode::kInvalidBelief,
                    fmt::format("{} is not symmetric at ({}, {})", what, i + 1, j + 1));
      }
    }
  }
  return 0.5 * (m + m.transpose());
}

void require_psd(const Matrix& sigma) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(sigma, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  const double lmax = std::max(std::abs(ev.maxCoeff()), std::abs(ev.minCoeff()));
  if (ev.minCoeff() < -kKernelRel * lmax) {
    throw Error(ErrorCode::kInvalidBelief,
                fmt::format("Sigma is not positive semi-definite (min eigenvalue {:.3e})",
                            ev.minCoeff()));
  }
}

// Symmetric positive-definite solves with the condition-number cutoff.
class SpdSolver {
 public:
  explicit SpdSolver(const Matrix& sigma) : ldlt_(sigma) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(sigma, Eigen::EigenvaluesOnly);
    const double lmin = es.eigenvalues().minCoeff();
    const double lmax = es.eigenvalues().maxCoeff();
    if (!(lmin > 0.0) || lmax / lmin > tol::kMaxCondition) {
      throw Error(ErrorCode::kSingularCovariance,
                  fmt::format("Sigma is singular (eigenvalues in [{:.3e}, {:.3e}]); use "
                              "kernel_feasibility",
                              lmin, lmax));
    }
  }
  Vector solve(const Vector& b) const { return ldlt_.solve(b); }

 private:
  Eigen::LDLT<Matrix> ldlt_;
};

// t^2 / (a^T Sigma^-1 a) and its minimizer.
OptimalPoint hyperplane_minimum(const Matrix& sigma, const Vector& a, double t) {
  const Vector w = SpdSolver(sigma).solve(a);
  const double d = a.dot(w);
  if (!(d > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "hyperplane normal a must be nonzero");
  }
  return {t * w / d, t * t / d, t * t / d};
}

OptimalPoint simplex_minimum(const Matrix& sigma, const Vector& a, double t) {
  const Index n = sigma.rows();
  if (n > kMaxSimplexSize) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("simplex-constrained optimum supports n <= {}", kMaxSimplexSize));
  }
  std::optional<OptimalPoint> best;
  for (unsigned long mask = 1; mask < (1UL << n); ++mask) {
    std::vector<Index> support;
    for (Index i = 0; i < n; ++i) {
      if (mask & (1UL << i)) support.push_back(i);
    }
    const Index m = Index(support.size());
    Matrix sub(m, m);
    Vector sub_a(m);
    for (Index p = 0; p < m; ++p) {
      sub_a(p) = a(support[p]);
      for (Index q = 0; q < m; ++q) sub(p, q) = sigma(support[p], support[q]);
    }
    Eigen::LDLT<Matrix> ldlt(sub);
    if (ldlt.info() != Eigen::Success) continue;
    const Vector w = ldlt.solve(sub_a);
    const double d = sub_a.dot(w);
    if (!(d > 0.0) || !std::isfinite(d)) continue;
    const Vector ys = t * w / d;
    if (ys.minCoeff() < -1e-12) continue;
    const double quad = t * t / d;
    if (best && quad >= best->quad) continue;
    Vector y = Vector::Zero(n);
    for (Index p = 0; p < m; ++p) y(support[p]) = std::max(0.0, ys(p));
    best = OptimalPoint{std::move(y), quad, quad};
  }
  if (!best) throw Error(ErrorCode::kEmptyRegion, "no nonnegative point on the hyperplane");
  return *best;
}

}  // namespace

BeliefModel BeliefModel::from_covariance(double zeta, Matrix sigma) {
  if (!std::isfinite(zeta)) throw Error(ErrorCode::kInvalidBelief, "zeta is not finite");
  validate_square(sigma, "Sigma");
  sigma = symmetrized(sigma, "Sigma");
  for (Index i = 0; i < sigma.rows(); ++i) {
    if (!(sigma(i, i) > 0.0)) {
      throw Error(ErrorCode::kInvalidBelief,
                  fmt::format("sigma_{}^2 = {} must be positive", i + 1, sigma(i, i)));
    }
  }
  require_psd(sigma);
  return BeliefModel(zeta, std::move(sigma));
}

BeliefModel BeliefModel::from_correlations(double zeta, const Vector& sigma2, const Matrix& rho) {
  const Index n = sigma2.size();
  if (rho.rows() != n || rho.cols() != n) {
    throw Error(ErrorCode::kInvalidBelief,
                fmt::format("rho must be {}x{}, got {}x{}", n, n, rho.rows(), rho.cols()));
  }
  for (Index i = 0; i < n; ++i) {
    if (!(sigma2(i) > 0.0) || !std::isfinite(sigma2(i))) {
      throw Error(ErrorCode::kInvalidBelief,
                  fmt::format("sigma_{}^2 = {} must be positive and finite", i + 1, sigma2(i)));
    }
  }
  Matrix r = rho;
  r.diagonal().setOnes();
  if (!r.allFinite()) throw Error(ErrorCode::kInvalidBelief, "rho is not finite");
  r = symmetrized(r, "rho");
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (i != j && !(std::abs(r(i, j)) < 1.0)) {
        throw Error(ErrorCode::kInvalidBelief,
                    fmt::format("|rho_{}{}| = {} must be < 1", i + 1, j + 1, std::abs(r(i, j))));
      }
    }
  }
  const Vector sd = sigma2.cwiseSqrt();
  return from_covariance(zeta, sd.asDiagonal() * r * sd.asDiagonal());
}

BeliefModel BeliefModel::independent(double zeta, const Vector& sigma2) {
  return from_correlations(zeta, sigma2, Matrix::Identity(sigma2.size(), sigma2.size()));
}

BeliefModel BeliefModel::point_mass(double zeta, Index n) {
  if (n < 2) throw Error(ErrorCode::kInvalidBelief, "point mass needs n >= 2");
  return BeliefModel(zeta, Matrix::Zero(n, n));
}

bool BeliefModel::is_diagonal() const {
  const Matrix off = sigma_ - Matrix(sigma_.diagonal().asDiagonal());
  return (off.array() == 0.0).all();
}

Vector BeliefModel::std_devs() const { return sigma_.diagonal().cwiseSqrt(); }

Matrix BeliefModel::correlations() const {
  const Vector sd = std_devs();
  Matrix r = sigma_;
  for (Index i = 0; i < r.rows(); ++i) {
    for (Index j = 0; j < r.cols(); ++j) {
      r(i, j) = i == j ? 1.0 : sigma_(i, j) / (sd(i) * sd(j));
    }
  }
  return r;
}

std::string_view to_string(RegionLabel label) {
  static constexpr std::string_view names[] = {"G1", "G2", "G3", "G4", "G5",
                                               "G6", "G7", "G8", "G9"};
  return names[int(label)];
}

std::optional<RegionLabel> parse_region_label(std::string_view text) {
  for (int k = 0; k < 9; ++k) {
    if (to_string(RegionLabel(k)) == text) return RegionLabel(k);
  }
  return std::nullopt;
}

std::string_view to_string(RegionClass c) {
  switch (c) {
    case RegionClass::kInterior: return "INTERIOR";
    case RegionClass::kBoundary: return "BOUNDARY";
    case RegionClass::kExterior: return "EXTERIOR";
    case RegionClass::kOffHyperplane: return "OFF_HYPERPLANE";
  }
  return "?";
}

std::string_view to_string(WisdomClass c) {
  switch (c) {
    case WisdomClass::kConcentrating: return "CONCENTRATING";
    case WisdomClass::kNeutral: return "NEUTRAL";
    case WisdomClass::kDispersing: return "DISPERSING";
  }
  return "?";
}

double initial_group_variance(const BeliefModel& model) {
  const double n = double(model.size());
  return model.sigma().sum() / (n * n);
}

double group_variance(const Vector& y, const BeliefModel& model, double prefactor) {
  require_same_size(model.size(), y.size(), "social power");
  return prefactor * prefactor * y.dot(model.sigma() * y);
}

RegionSpec make_region(RegionLabel label, const BeliefModel& model,
                       const std::optional<Signature>& v) {
  const Index n = model.size();
  const double nn = double(n);
  const double total = model.sigma().sum();
  RegionSpec region;
  region.label = label;
  region.sigma = model.sigma();
  region.a = Vector::Ones(n);
  region.t = 1.0;
  region.c = total / (nn * nn);

  switch (label) {
    case RegionLabel::kG1:
      region.simplex = true;
      return region;
    case RegionLabel::kG2:
    case RegionLabel::kG6:
      return region;
    default:
      break;
  }
  if (!v) {
    throw Error(ErrorCode::kLabelNeedsSignature,
                fmt::format("region {} needs a signature v", to_string(label)));
  }
  require_same_size(n, v->size(), "signature");
  region.a = v->values();
  const double s = v->sum();
  switch (label) {
    case RegionLabel::kG3:
    case RegionLabel::kG7:
      region.c = s == 0.0 ? kInf : total / (s * s);
      region.prefactor = s / nn;
      break;
    case RegionLabel::kG4:
    case RegionLabel::kG8:
      region.t = s / nn;
      break;
    default:
      break;
  }
  return region;
}

RegionClass classify(const Vector& y, const RegionSpec& region) {
  require_same_size(region.a.size(), y.size(), "social power");
  if (std::abs(region.a.dot(y) - region.t) > tol::kClassify * std::max(1.0, std::abs(region.t))) {
    return RegionClass::kOffHyperplane;
  }
  if (region.simplex && y.minCoeff() < -tol::kClassify) return RegionClass::kExterior;
  if (std::isinf(region.c)) return RegionClass::kInterior;
  const double q = y.dot(region.sigma * y);
  if (std::abs(q - region.c) <= tol::kClassify * region.c) return RegionClass::kBoundary;
  return q < region.c ? RegionClass::kInterior : RegionClass::kExterior;
}

OptimalPoint optimal_social_power(const RegionSpec& region) {
  OptimalPoint unconstrained = hyperplane_minimum(region.sigma, region.a, region.t);
  OptimalPoint best = unconstrained;
  if (region.simplex && unconstrained.y.minCoeff() < 0.0) {
    best = simplex_minimum(region.sigma, region.a, region.t);
  }
  best.var_star = region.prefactor * region.prefactor * best.quad;
  return best;
}

PositivityReport positivity_check(const BeliefModel& model) {
  const Index n = model.size();
  const Matrix& sigma = model.sigma();
  SpdSolver solver(sigma);
  PositivityReport report;
  report.witness = solver.solve(Vector::Ones(n));
  report.is_positive = (report.witness.array() > 0.0).all();

  bool off_nonpositive = true;
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if (i != j && sigma(i, j) > 0.0) off_nonpositive = false;
    }
  }
  if (off_nonpositive) {
    const Matrix inverse = sigma.ldlt().solve(Matrix::Identity(n, n));
    report.m_matrix_test = (inverse.array() >= -tol::kEig * inverse.cwiseAbs().maxCoeff()).all();
  }
  const Vector rows = sigma.rowwise().sum();
  const double kappa = rows.mean();
  report.row_sum_test =
      (rows.array() - kappa).abs().maxCoeff() <= tol::kClassify * std::max(1.0, std::abs(kappa));
  return report;
}

KernelFeasibility kernel_feasibility(const BeliefModel& model, const Vector& a, double t) {
  const Index n = model.size();
  require_same_size(n, a.size(), "hyperplane normal");
  if (!(a.norm() > 0.0)) throw Error(ErrorCode::kInvalidArgument, "hyperplane normal is zero");

  Eigen::SelfAdjointEigenSolver<Matrix> es(model.sigma());
  const Vector& ev = es.eigenvalues();
  const Matrix& u = es.eigenvectors();
  const double lmax = ev.cwiseAbs().maxCoeff();
  const double cutoff = kKernelRel * lmax;

  KernelFeasibility result;
  std::vector<Index> kernel_cols;
  for (Index k = 0; k < n; ++k) {
    if (ev(k) <= cutoff) kernel_cols.push_back(k);
  }
  result.kernel.resize(n, Index(kernel_cols.size()));
  for (Index k = 0; k < Index(kernel_cols.size()); ++k) {
    result.kernel.col(k) = u.col(kernel_cols[k]);
  }

  const Vector ka = result.kernel.transpose() * a;
  if (ka.size() > 0 && ka.norm() > 1e-12 * a.norm()) {
    result.feasible = true;
    result.y_star = t * result.kernel * ka / ka.squaredNorm();
    result.variance = result.y_star.dot(model.sigma() * result.y_star);
    return result;
  }

  // a is orthogonal to the kernel: minimize over range(Sigma) via Sigma^+.
  Vector pinv_a = Vector::Zero(n);
  for (Index k = 0; k < n; ++k) {
    if (ev(k) > cutoff) pinv_a += u.col(k) * (u.col(k).dot(a) / ev(k));
  }
  const double d = a.dot(pinv_a);
  result.y_star = t * pinv_a / d;
  result.variance = t * t / d;
  return result;
}

RankOneStructure rank_one_structure(const BeliefModel& model) {
  const Matrix& sigma = model.sigma();
  const Index n = sigma.rows();
  RankOneStructure result;
  for (Index i = 0; i < n; ++i) {
    const double s2 = sigma(i, i);
    const double band = tol::kClassify * std::max(1.0, std::abs(s2));
    if ((sigma.col(i).array() - s2).abs().maxCoeff() > band) continue;
    bool smallest = true;
    for (Index j = 0; j < n; ++j) {
      if (j != i && !(sigma(j, j) > s2 + band)) smallest = false;
    }
    if (!smallest) continue;
    Matrix b = sigma;
    b.col(i).setZero();
    result.matches = true;
    result.index = i;
    result.b = std::move(b);
    return result;
  }
  return result;
}

RegionRadius region_radius(const RegionSpec& region) {
  if (std::isinf(region.c)) return {true, kInf};
  const OptimalPoint opt = hyperplane_minimum(region.sigma, region.a, region.t);
  const double r2 = region.c - opt.quad;
  return {r2 > tol::kClassify * region.c, r2};
}

double volume_ratio(const RegionSpec& region_k, const RegionSpec& region_l) {
  require_same_size(region_k.a.size(), region_l.a.size(), "region dimension");
  const RegionRadius rk = region_radius(region_k);
  const RegionRadius rl = region_radius(region_l);
  if (!rk.nonempty || !rl.nonempty) {
    throw Error(ErrorCode::kEmptyRegion,
                fmt::format("volume ratio needs nonempty regions ({} r2 = {:.6g}, {} r2 = {:.6g})",
                            to_string(region_k.label), rk.r2, to_string(region_l.label), rl.r2));
  }
  const double n = double(region_k.a.size());
  return std::pow(rk.r2 / rl.r2, (n - 1.0) / 2.0);
}

double sensitivity(const RegionSpec& region, const SensitivityTarget& wrt) {
  const Index n = region.a.size();
  if (!(region.a.array() == 1.0).all() || region.t != 1.0) {
    throw Error(ErrorCode::kInvalidArgument,
                "sensitivity applies to regions with a = 1 and t = 1");
  }
  if (wrt.i < 0 || wrt.i >= n || wrt.j < 0 || wrt.j >= n) {
    throw Error(ErrorCode::kInvalidArgument, "sensitivity index out of range");
  }
  const Matrix& sigma = region.sigma;
  const Vector w = SpdSolver(sigma).solve(Vector::Ones(n));
  const Vector y = w / w.sum();
  const double inv_n2 = 1.0 / double(n * n);
  const Vector sd = sigma.diagonal().cwiseSqrt();
  auto weight = [&](Index i, Index j) { return inv_n2 - y(i) * y(j); };

  if (wrt.kind == SensitivityTarget::Kind::kRho) {
    if (wrt.i == wrt.j) throw Error(ErrorCode::kInvalidArgument, "rho_ii is fixed at 1");
    return 2.0 * sd(wrt.i) * sd(wrt.j) * weight(wrt.i, wrt.j);
  }
  const Index i = wrt.i;
  double d = 2.0 * sd(i) * weight(i, i);
  for (Index j = 0; j < n; ++j) {
    if (j == i) continue;
    const double rho = sigma(i, j) / (sd(i) * sd(j));
    d += 2.0 * rho * sd(j) * weight(i, j);
  }
  return d;
}

MeanReport mean_report(const Vector& y, const BeliefModel& model, MeanCase mean_case,
                       const std::optional<Signature>& v) {
  require_same_size(model.size(), y.size(), "social power");
  double factor = y.sum();
  if (mean_case == MeanCase::kBipartitePopConsensus) {
    if (!v) {
      throw Error(ErrorCode::kLabelNeedsSignature, "population consensus mean needs v");
    }
    factor *= v->sum() / double(model.size());
  }
  MeanReport report;
  report.mean_value = factor * model.zeta();
  report.mean_accurate = std::abs(report.mean_value - model.zeta()) <=
                         tol::kClassify * std::max(1.0, std::abs(model.zeta()));
  return report;
}

WisdomClass compare_variances(double final_variance, double initial_variance) {
  const double band = tol::kClassify * initial_variance;
  if (final_variance < initial_variance - band) return WisdomClass::kConcentrating;
  if (final_variance > initial_variance + band) return WisdomClass::kDispersing;
  return WisdomClass::kNeutral;
}

RegionLabel select_region(const ModelKind& kind, Aggregator aggregator, bool diagonal_sigma) {
  const int shift = diagonal_sigma ? 0 : 4;
  int base = 2;
  if (kind.partite == Partite::kBipartite) {
    if (aggregator == Aggregator::kBipartition) {
      base = 5;
    } else {
      base = kind.dynamics == Dynamics::kSFJ ? 4 : 3;
    }
  }
  return RegionLabel(base - 1 + shift);
}

WisdomReport wisdom_report(const ModelKind& kind, const EquilibriumResult& eq,
                           const BeliefModel& belief) {
  require_same_size(eq.social_power.size(), belief.size(), "belief model");
  WisdomReport report;
  report.equilibrium = eq;
  report.warnings = eq.warnings;

  const Signature v(eq.signature);
  report.region = make_region(select_region(kind, eq.aggregator, belief.is_diagonal()), belief, v);
  const Vector& y = eq.social_power;

  report.mean_value = eq.mean_factor * belief.zeta();
  report.mean_accurate = std::abs(report.mean_value - belief.zeta()) <=
                         tol::kClassify * std::max(1.0, std::abs(belief.zeta()));
  report.initial_variance = initial_group_variance(belief);
  report.final_variance = group_variance(y, belief, report.region.prefactor);
  report.classification = compare_variances(report.final_variance, report.initial_variance);
  report.region_class = classify(y, report.region);
  if (std::isinf(report.region.c)) {
    report.warnings.emplace_back(
        "1^T v = 0: the population average and its variance vanish");
  }

  try {
    report.optimum = optimal_social_power(report.region);
    report.radius = region_radius(report.region);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kSingularCovariance) throw;
    const KernelFeasibility kf = kernel_feasibility(belief, report.region.a, report.region.t);
    report.singular_covariance = true;
    report.optimum.y = kf.y_star;
    report.optimum.quad = kf.variance;
    report.optimum.var_star =
        report.region.prefactor * report.region.prefactor * kf.variance;
    report.radius.r2 = report.region.c - kf.variance;
    report.radius.nonempty = report.radius.r2 > tol::kClassify * report.region.c;
    report.warnings.emplace_back(kf.feasible ? "Sigma singular: zero variance is attainable"
                                             : "Sigma singular: kernel misses the hyperplane");
  }
  report.optimum_gap = (y - report.optimum.y).norm();
  return report;
}

WisdomReport wisdom_report(const ModelKind& kind, const InteractionMatrix& w,
                           const std::optional<StubbornnessProfile>& theta,
                           const BeliefModel& belief, Aggregator aggregator) {
  require_same_size(w.size(), belief.size(), "belief model");
  const Vector expected_x0 = Vector::Constant(w.size(), belief.zeta());
  return wisdom_report(kind, equilibrium(kind, w, theta, expected_x0, aggregator), belief);
}

WisdomReport wisdom_report(const CTModelSpec& spec, const BeliefModel& belief,
                           Aggregator aggregator) {
  require_same_size(spec.size(), belief.size(), "belief model");
  const Vector expected_x0 = Vector::Constant(spec.size(), belief.zeta());
  return wisdom_report(spec.model_kind(), ct_equilibrium(spec, expected_x0, aggregator), belief);
}

}  // namespace signedcrowd
