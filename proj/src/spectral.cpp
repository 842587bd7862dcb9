#include "signedcrowd/spectral.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "signedcrowd/error.hpp"

namespace signedcrowd {

std::string_view to_string(SpectralClass c) {
  switch (c) {
    case SpectralClass::kSPF: return "SPF";
    case SpectralClass::kSSPF: return "SSPF";
    case SpectralClass::kEventuallyPositive: return "EVENTUALLY_POSITIVE";
    case SpectralClass::kNone: return "NONE";
  }
  return "?";
}

std::string_view to_string(DominanceStatus s) {
  switch (s) {
    case DominanceStatus::kOk: return "ok";
    case DominanceStatus::kDegenerate: return "degenerate_dominance";
    case DominanceStatus::kComplex: return "complex_dominant";
    case DominanceStatus::kNonPositive: return "nonpositive_dominant";
    case DominanceStatus::kNotStochastic: return "not_stochastic";
  }
  return "?";
}

std::optional<Signature> SpectralCertificate::signature() const {
  if (cls == SpectralClass::kNone || v_right.size() == 0) return std::nullopt;
  Vector s(v_right.size());
  for (Index i = 0; i < s.size(); ++i) s(i) = v_right(i) >= 0.0 ? 1.0 : -1.0;
  return Signature(std::move(s));
}

std::vector<std::complex<double>> sorted_spectrum(const Matrix& m) {
  Eigen::EigenSolver<Matrix> solver(m, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::kNonConvergence, "eigensolver did not converge");
  }
  std::vector<std::complex<double>> values(solver.eigenvalues().data(),
                                           solver.eigenvalues().data() + m.rows());
  std::stable_sort(values.begin(), values.end(), [](auto a, auto b) {
    const double ma = std::abs(a);
    const double mb = std::abs(b);
    if (ma != mb) return ma > mb;
    return a.real() > b.real();
  });
  return values;
}

double spectral_radius(const Matrix& m) { return std::abs(sorted_spectrum(m).front()); }

double spectral_abscissa(const Matrix& m) {
  const auto values = sorted_spectrum(m);
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& v : values) best = std::max(best, v.real());
  return best;
}

namespace {

double inf_norm(const Matrix& m) { return m.cwiseAbs().rowwise().sum().maxCoeff(); }

// Right and left null vectors of (M - lambda I) from one SVD.
void null_vectors(const Matrix& m, double lambda, Vector& right, Vector& left) {
  const Index n = m.rows();
  const Matrix shifted = m - lambda * Matrix::Identity(n, n);
  Eigen::JacobiSVD<Matrix> svd(shifted, Eigen::ComputeFullU | Eigen::ComputeFullV);
  right = svd.matrixV().col(n - 1);
  left = svd.matrixU().col(n - 1);
}

// First index whose magnitude is within a relative 1e-6 of the largest, so a
// ±1 pattern is always anchored at its first entry.
Index argmax_abs(const Vector& v) {
  const double top = v.cwiseAbs().maxCoeff();
  for (Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) >= top * (1.0 - tol::kStochastic)) return i;
  }
  return 0;
}

void normalize_left(SpectralCertificate& cert, const Vector& against) {
  const double dot = cert.z_left.dot(against);
  if (std::abs(dot) > 1e-14 * cert.z_left.norm()) {
    cert.z_left /= dot;
  } else {
    cert.z_left.normalize();
  }
}

Matrix require_well_conditioned_solve(const Matrix& system, const Matrix& rhs,
                                      std::string_view what) {
  Eigen::JacobiSVD<Matrix> svd(system);
  const auto& s = svd.singularValues();
  const double smin = s(s.size() - 1);
  if (smin <= 0.0 || s(0) / smin > tol::kMaxCondition) {
    throw Error(ErrorCode::kSingularMatrix,
                fmt::format("{} is numerically singular (condition {:.3e})", what,
                            smin > 0.0 ? s(0) / smin : INFINITY));
  }
  return system.fullPivLu().solve(rhs);
}

}  // namespace

SpectralCertificate dominant_eigenpair(const InteractionMatrix& im) {
  const Matrix& m = im.entries();
  const Index n = m.rows();

  SpectralCertificate cert;
  cert.spectrum = sorted_spectrum(m);
  const auto lead = cert.spectrum[0];
  cert.gap = std::abs(lead) - std::abs(cert.spectrum[1]);
  cert.lambda_dom = lead.real();

  if (std::abs(lead.imag()) > tol::kGap) {
    cert.status = DominanceStatus::kComplex;
    return cert;
  }

  null_vectors(m, cert.lambda_dom, cert.v_right, cert.z_left);
  cert.v_right /= cert.v_right(argmax_abs(cert.v_right));

  if (cert.gap <= tol::kGap) {
    cert.status = DominanceStatus::kDegenerate;
  } else if (cert.lambda_dom <= 0.0) {
    cert.status = DominanceStatus::kNonPositive;
  }
  if (cert.status != DominanceStatus::kOk) {
    normalize_left(cert, cert.v_right);
    return cert;
  }

  // Classification ladder: rho = 1, unit-modulus right vector, gauge row sums.
  const bool unit_radius = std::abs(cert.lambda_dom - 1.0) <= tol::kStochastic;
  const bool unit_modulus =
      (cert.v_right.cwiseAbs().array() - 1.0).abs().maxCoeff() <= tol::kStochastic;
  if (!unit_radius || !unit_modulus) {
    cert.status = DominanceStatus::kNotStochastic;
    normalize_left(cert, cert.v_right);
    return cert;
  }

  Vector sig(n);
  for (Index i = 0; i < n; ++i) sig(i) = cert.v_right(i) >= 0.0 ? 1.0 : -1.0;
  const Vector gauge_rows = sig.asDiagonal() * m * sig;
  if ((gauge_rows.array() - 1.0).abs().maxCoeff() > tol::kStochastic) {
    cert.status = DominanceStatus::kNotStochastic;
    normalize_left(cert, cert.v_right);
    return cert;
  }

  if ((sig.array() > 0.0).all()) {
    cert.cls = SpectralClass::kSPF;
    normalize_left(cert, Vector::Ones(n));
    if (im.has_negative_entry() && (cert.z_left.array() > 0.0).all()) {
      cert.cls = SpectralClass::kEventuallyPositive;
    }
  } else {
    cert.cls = SpectralClass::kSSPF;
    normalize_left(cert, cert.v_right);
  }
  return cert;
}

SpectralCertificate certify(const InteractionMatrix& im) {
  SpectralCertificate cert = dominant_eigenpair(im);
  if (cert.cls == SpectralClass::kNone) return cert;

  const Matrix& m = im.entries();
  const double bound = tol::kEig * std::max(1.0, inf_norm(m));
  const double right_res = (m * cert.v_right - cert.lambda_dom * cert.v_right).cwiseAbs().maxCoeff();
  const Vector left_row = cert.z_left.transpose() * m;
  const double left_res = (left_row - cert.lambda_dom * cert.z_left).cwiseAbs().maxCoeff();
  if (right_res > bound || left_res > bound) {
    throw Error(ErrorCode::kNonConvergence,
                fmt::format("eigenpair residuals {:.3e}/{:.3e} exceed {:.3e}", right_res,
                            left_res, bound));
  }
  return cert;
}

InteractionMatrix gauge_transform(const InteractionMatrix& m, const Signature& v) {
  require_same_size(m.size(), v.size(), "signature");
  const auto& s = v.values();
  return InteractionMatrix(s.asDiagonal() * m.entries() * s.asDiagonal());
}

SignedLaplacian signed_laplacian(const InteractionMatrix& a) {
  const Matrix& adj = a.entries();
  const Index n = adj.rows();
  Matrix l = -adj;
  for (Index i = 0; i < n; ++i) {
    double in_degree = 0.0;
    for (Index j = 0; j < n; ++j) {
      if (j != i) in_degree += adj(i, j);
    }
    l(i, i) = in_degree;
  }
  return SignedLaplacian(std::move(l));
}

Matrix fj_propagator(const Matrix& w, const StubbornnessProfile& theta) {
  require_same_size(w.rows(), theta.size(), "stubbornness");
  const Index n = w.rows();
  const Matrix t = theta.diagonal();
  const Matrix system = Matrix::Identity(n, n) - (Matrix::Identity(n, n) - t) * w;
  return require_well_conditioned_solve(system, t, "I - (I - Theta) W");
}

Matrix ct_fj_propagator(const Matrix& l, const StubbornnessProfile& theta) {
  require_same_size(l.rows(), theta.size(), "stubbornness");
  const Index n = l.rows();
  const Matrix t = theta.diagonal();
  const Matrix system = (Matrix::Identity(n, n) - t) * l + t;
  return require_well_conditioned_solve(system, t, "(I - Theta) L + Theta");
}

bool AssumptionReport::all_passed() const {
  return std::all_of(clauses.begin(), clauses.end(), [](const auto& c) { return c.passed; });
}

const AssumptionClause* AssumptionReport::first_failure() const {
  for (const auto& c : clauses) {
    if (!c.passed) return &c;
  }
  return nullptr;
}

void require_assumptions(const AssumptionReport& report) {
  if (const auto* failed = report.first_failure()) {
    throw Error(ErrorCode::kAssumptionViolated,
                fmt::format("{} ({})", failed->name, failed->detail));
  }
}

namespace {

bool class_matches(const SpectralCertificate& cert, Partite partite) {
  return partite == Partite::kUnipartite ? cert.satisfies_spf() : cert.satisfies_sspf();
}

std::string_view wanted_class(Partite partite) {
  return partite == Partite::kUnipartite ? "SPF" : "SSPF";
}

std::string describe(const SpectralCertificate& cert) {
  return fmt::format("class {}, status {}, lambda {:.6g}, gap {:.3e}", to_string(cert.cls),
                     to_string(cert.status), cert.lambda_dom, cert.gap);
}

// Appends the stubbornness clauses; returns false when theta is unusable.
bool check_theta(AssumptionReport& report, Index n,
                 const std::optional<StubbornnessProfile>& theta) {
  if (!theta) {
    report.clauses.push_back({"stubbornness provided", false, 0.0, "theta required"});
    return false;
  }
  if (theta->size() != n) {
    report.clauses.push_back({"stubbornness provided", false, double(theta->size()),
                              fmt::format("theta has size {}, expected {}", theta->size(), n)});
    return false;
  }
  report.clauses.push_back({"0 <= theta_i < 1", true, theta->values().maxCoeff(), "ok"});
  if (theta->all_zero()) {
    report.clauses.push_back(
        {"theta not identically zero", false, 0.0, "Theta = 0 makes P degenerate"});
    return false;
  }
  report.clauses.push_back({"theta not identically zero", true, theta->values().sum(), "ok"});
  return true;
}

void check_propagator(AssumptionReport& report, const Matrix& p, Partite partite,
                      std::string_view name) {
  SpectralCertificate cert = dominant_eigenpair(InteractionMatrix(p));
  const bool ok = class_matches(cert, partite);
  report.clauses.push_back({fmt::format("{} satisfies {}", name, wanted_class(partite)), ok,
                            cert.gap, describe(cert)});
  report.propagator = std::move(cert);
}

}  // namespace

AssumptionReport check_assumptions(const ModelKind& kind, const InteractionMatrix& w,
                                   const std::optional<StubbornnessProfile>& theta) {
  if (kind.time != TimeDomain::kDiscrete) {
    throw Error(ErrorCode::kInvalidArgument,
                "continuous-time assumptions take a SignedLaplacian");
  }
  AssumptionReport report;
  report.kind = kind;
  const Index n = w.size();

  SpectralCertificate base = dominant_eigenpair(w);
  const bool base_ok = class_matches(base, kind.partite);
  report.clauses.push_back({fmt::format("W satisfies {}", wanted_class(kind.partite)),
                            base_ok, base.gap, describe(base)});
  report.base = std::move(base);
  if (kind.dynamics == Dynamics::kDeGroot) return report;

  if (!check_theta(report, n, theta)) return report;

  const Matrix damped = (Matrix::Identity(n, n) - theta->diagonal()) * w.entries();
  const double rho = spectral_radius(damped);
  report.clauses.push_back({"rho((I - Theta) W) < 1", rho < 1.0 - tol::kGap, rho,
                            fmt::format("rho = {:.6g}", rho)});
  if (kind.dynamics == Dynamics::kSFJ || rho >= 1.0 - tol::kGap) return report;

  try {
    check_propagator(report, fj_propagator(w.entries(), *theta), kind.partite, "P");
  } catch (const Error& e) {
    report.clauses.push_back({"P satisfies " + std::string(wanted_class(kind.partite)),
                              false, 0.0, e.what()});
  }
  return report;
}

std::vector<double> phi_candidates(const SignedLaplacian& l) {
  std::vector<double> phis;
  phis.push_back(1.0 + l.entries().diagonal().cwiseAbs().maxCoeff());
  constexpr int kGridPoints = 61;
  for (int k = 0; k < kGridPoints; ++k) {
    phis.push_back(std::pow(10.0, -3.0 + 6.0 * k / (kGridPoints - 1)));
  }
  return phis;
}

AssumptionReport check_assumptions(const ModelKind& kind, const SignedLaplacian& l,
                                   const std::optional<StubbornnessProfile>& theta) {
  if (kind.time != TimeDomain::kContinuous) {
    throw Error(ErrorCode::kInvalidArgument, "discrete-time assumptions take a W matrix");
  }
  AssumptionReport report;
  report.kind = kind;
  const Index n = l.size();
  const Matrix id = Matrix::Identity(n, n);

  std::optional<SpectralCertificate> best;
  for (double phi : phi_candidates(l)) {
    SpectralCertificate cert = dominant_eigenpair(InteractionMatrix(id - l.entries() / phi));
    if (class_matches(cert, kind.partite)) {
      report.phi_witness = phi;
      best = std::move(cert);
      break;
    }
    if (!best || cert.gap > best->gap) best = std::move(cert);
  }
  const std::string name =
      fmt::format("I - L/phi satisfies {} for some phi > 0", wanted_class(kind.partite));
  if (report.phi_witness) {
    report.clauses.push_back(
        {name, true, *report.phi_witness, fmt::format("witness phi = {:.6g}", *report.phi_witness)});
  } else {
    report.clauses.push_back({name, false, 0.0, "no witness on the phi grid; best " + describe(*best)});
  }
  report.base = std::move(best);
  if (kind.dynamics == Dynamics::kDeGroot) return report;

  if (!check_theta(report, n, theta)) return report;

  const Matrix t = theta->diagonal();
  const Matrix system = (id - t) * l.entries() + t;
  const double abscissa = spectral_abscissa(-system);
  report.clauses.push_back({"-((I - Theta) L + Theta) Hurwitz", abscissa < -tol::kGap, abscissa,
                            fmt::format("spectral abscissa = {:.6g}", abscissa)});
  if (kind.dynamics == Dynamics::kSFJ || abscissa >= -tol::kGap) return report;

  try {
    check_propagator(report, ct_fj_propagator(l.entries(), *theta), kind.partite, "P_L");
  } catch (const Error& e) {
    report.clauses.push_back({"P_L satisfies " + std::string(wanted_class(kind.partite)),
                              false, 0.0, e.what()});
  }
  return report;
}

}  // namespace signedcrowd
