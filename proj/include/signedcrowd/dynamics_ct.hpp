#pragma once

#include <optional>
#include <vector>

#include "signedcrowd/dynamics_dt.hpp"
#include "signedcrowd/spectral.hpp"
#include "signedcrowd/types.hpp"

namespace signedcrowd {

/// Continuous-time model: x' = -L x (DeGroot) or
/// x' = -((I - Theta) L + Theta) x + Theta x(0) (SFJ; concatenated restarts it).
struct CTModelSpec {
  CTModelSpec(SignedLaplacian l, std::optional<StubbornnessProfile> theta, Dynamics kind,
              Partite partite);

  SignedLaplacian l;
  std::optional<StubbornnessProfile> theta;
  Dynamics kind;
  Partite partite;

  ModelKind model_kind() const { return {kind, TimeDomain::kContinuous, partite}; }
  Index size() const { return l.size(); }
  /// L for DeGroot, (I - Theta) L + Theta otherwise.
  Matrix system_matrix() const;
};

AssumptionReport check_assumptions(const CTModelSpec& spec);

EquilibriumResult ct_equilibrium(const CTModelSpec& spec, const Vector& x0,
                                 Aggregator aggregator = Aggregator::kPopulation);

struct CTOptions {
  double dt = 0.0;     // 0: 1e-3 / rho(system matrix)
  double t_end = 0.0;  // 0: settle_time(spec), per discussion for concatenated models
  /// Keep every stride-th step; 0 picks a stride giving about 1000 rows.
  long record_stride = 0;
  long max_discussions = 10'000;
  double outer_tol = 1e-10;
  bool allow_partial = false;
};

struct CTTrajectory {
  std::vector<double> t;
  std::vector<Vector> x;
  /// Discussion index of each row (1 for DeGroot/SFJ).
  std::vector<long> s;
  bool converged = true;
};

double default_dt(const CTModelSpec& spec);
/// 20 / (slowest nonzero decay rate of the system matrix).
double settle_time(const CTModelSpec& spec);

/// Fixed-step RK4. Throws kStepSizeUnstable once |x| exceeds 1e12.
CTTrajectory ct_integrate(const CTModelSpec& spec, const Vector& x0,
                          const CTOptions& options = {});

}  // namespace signedcrowd
