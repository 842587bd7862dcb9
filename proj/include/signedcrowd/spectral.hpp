#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "signedcrowd/types.hpp"

namespace signedcrowd {

enum class SpectralClass { kSPF, kSSPF, kEventuallyPositive, kNone };

/// Why a certificate ended up in class NONE (kOk otherwise).
enum class DominanceStatus {
  kOk,
  kDegenerate,   // |lambda_1| - |lambda_2| <= tol::kGap
  kComplex,      // dominant eigenvalue not real
  kNonPositive,  // dominant eigenvalue real but <= 0
  kNotStochastic // dominant pair fine, ladder conditions fail
};

std::string_view to_string(SpectralClass c);
std::string_view to_string(DominanceStatus s);

struct SpectralCertificate {
  double lambda_dom = 0.0;
  double gap = 0.0;
  Vector v_right;
  Vector z_left;
  SpectralClass cls = SpectralClass::kNone;
  DominanceStatus status = DominanceStatus::kOk;
  /// Full spectrum sorted by decreasing modulus.
  std::vector<std::complex<double>> spectrum;

  /// True for SPF and its eventually-positive refinement.
  bool satisfies_spf() const {
    return cls == SpectralClass::kSPF || cls == SpectralClass::kEventuallyPositive;
  }
  bool satisfies_sspf() const { return cls == SpectralClass::kSSPF; }
  /// The ±1 right vector for SPF/SSPF/EP certificates.
  std::optional<Signature> signature() const;
};

/// Eigenvalue of maximal modulus with its left and right vectors, classified.
///
/// The right vector is scaled so that its largest-magnitude entry is +1 (first
/// such index on ties). For SPF/EP the left vector satisfies z^T 1 = 1, for SSPF
/// z^T v = 1. Dominance failures yield class kNone with the gap reported; only
/// eigensolver failure throws (kNonConvergence).
SpectralCertificate dominant_eigenpair(const InteractionMatrix& m);

/// dominant_eigenpair plus residual verification of the certified pair.
SpectralCertificate certify(const InteractionMatrix& m);

/// Xi M Xi with Xi = diag(v).
InteractionMatrix gauge_transform(const InteractionMatrix& m, const Signature& v);

/// L = D - A with D the diagonal of off-diagonal row sums.
SignedLaplacian signed_laplacian(const InteractionMatrix& a);

/// Eigenvalues sorted by decreasing modulus.
std::vector<std::complex<double>> sorted_spectrum(const Matrix& m);
double spectral_radius(const Matrix& m);
/// max Re(lambda).
double spectral_abscissa(const Matrix& m);

/// (I - (I - Theta) W)^{-1} Theta. Throws kSingularMatrix when the system
/// matrix has condition number above tol::kMaxCondition.
Matrix fj_propagator(const Matrix& w, const StubbornnessProfile& theta);
/// ((I - Theta) L + Theta)^{-1} Theta, same error contract.
Matrix ct_fj_propagator(const Matrix& l, const StubbornnessProfile& theta);

struct AssumptionClause {
  std::string name;
  bool passed = false;
  double value = 0.0;
  std::string detail;
};

struct AssumptionReport {
  ModelKind kind;
  std::vector<AssumptionClause> clauses;
  /// Certificate of W (DT) or of I - L/phi at the witness phi (CT).
  std::optional<SpectralCertificate> base;
  /// Certificate of P (DT) or P_L (CT) for concatenated models.
  std::optional<SpectralCertificate> propagator;
  std::optional<double> phi_witness;

  bool all_passed() const;
  const AssumptionClause* first_failure() const;
};

/// Checks every clause of the stability assumption for the model kind.
/// Failures are reported, never thrown. kind.time must be kDiscrete.
AssumptionReport check_assumptions(const ModelKind& kind, const InteractionMatrix& w,
                                   const std::optional<StubbornnessProfile>& theta);

/// Continuous-time variant; searches phi for the SPF/SSPF clause on I - L/phi.
AssumptionReport check_assumptions(const ModelKind& kind, const SignedLaplacian& l,
                                   const std::optional<StubbornnessProfile>& theta);

/// Candidate phi values tried by the CT search, in order.
std::vector<double> phi_candidates(const SignedLaplacian& l);

/// Throws kAssumptionViolated naming the first failing clause.
void require_assumptions(const AssumptionReport& report);

}  // namespace signedcrowd
