#include "signedcrowd/dynamics_ct.hpp"

#include <cmath>

#include <fmt/format.h>

#include "signedcrowd/error.hpp"

namespace signedcrowd {

CTModelSpec::CTModelSpec(SignedLaplacian l_, std::optional<StubbornnessProfile> theta_,
                         Dynamics kind_, Partite partite_)
    : l(std::move(l_)), theta(std::move(theta_)), kind(kind_), partite(partite_) {
  if (kind != Dynamics::kDeGroot) {
    if (!theta) {
      throw Error(ErrorCode::kInvalidArgument, "stubbornness profile required");
    }
    require_same_size(l.size(), theta->size(), "stubbornness");
    if (theta->all_zero()) {
      throw Error(ErrorCode::kDegenerateStubbornness,
                  "Theta = 0 gives P_L = 0; use the DeGroot model instead");
    }
  }
}

Matrix CTModelSpec::system_matrix() const {
  if (kind == Dynamics::kDeGroot) return l.entries();
  const Index n = size();
  const Matrix t = theta->diagonal();
  return (Matrix::Identity(n, n) - t) * l.entries() + t;
}

AssumptionReport check_assumptions(const CTModelSpec& spec) {
  return check_assumptions(spec.model_kind(), spec.l, spec.theta);
}

EquilibriumResult ct_equilibrium(const CTModelSpec& spec, const Vector& x0,
                                 Aggregator aggregator) {
  require_same_size(spec.size(), x0.size(), "initial opinions");
  const AssumptionReport report = check_assumptions(spec);
  require_assumptions(report);

  // The base certificate is that of I - L/phi, whose left unit eigenvector is
  // the left kernel vector of L.
  const Vector signature = report.base->signature()->values();
  switch (spec.kind) {
    case Dynamics::kDeGroot:
      return assemble_equilibrium(spec.kind, spec.partite, signature, report.base->z_left,
                                  std::nullopt, x0, aggregator);
    case Dynamics::kSFJ:
      return assemble_equilibrium(spec.kind, spec.partite, signature, std::nullopt,
                                  ct_fj_propagator(spec.l.entries(), *spec.theta), x0,
                                  aggregator);
    case Dynamics::kConcatSFJ:
      return assemble_equilibrium(spec.kind, spec.partite, signature,
                                  report.propagator->z_left,
                                  ct_fj_propagator(spec.l.entries(), *spec.theta), x0,
                                  aggregator);
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown dynamics");
}

double default_dt(const CTModelSpec& spec) {
  const double rho = spectral_radius(spec.system_matrix());
  return 1e-3 / std::max(rho, 1e-300);
}

double settle_time(const CTModelSpec& spec) {
  const auto values = sorted_spectrum(spec.system_matrix());
  const double scale = std::abs(values.front());
  double slowest = std::numeric_limits<double>::infinity();
  for (const auto& v : values) {
    if (std::abs(v) > tol::kEig * std::max(1.0, scale)) slowest = std::min(slowest, v.real());
  }
  if (!(slowest > 0.0) || !std::isfinite(slowest)) {
    throw Error(ErrorCode::kAssumptionViolated,
                "system matrix has no positive decay rate; trajectory does not settle");
  }
  return 20.0 / slowest;
}

namespace {

constexpr double kBlowUp = 1e12;

struct Rk4 {
  const Matrix& a;  // x' = -a x + b
  Vector b;

  Vector rate(const Vector& x) const { return b - a * x; }

  void step(Vector& x, double h) const {
    const Vector k1 = rate(x);
    const Vector k2 = rate(x + 0.5 * h * k1);
    const Vector k3 = rate(x + 0.5 * h * k2);
    const Vector k4 = rate(x + h * k3);
    x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
};

void check_blow_up(const Vector& x, double t) {
  const double norm = x.cwiseAbs().maxCoeff();
  if (!(norm <= kBlowUp)) {
    throw Error(ErrorCode::kStepSizeUnstable,
                fmt::format("state norm {:.3e} exceeds 1e12 at t = {:.6g}", norm, t));
  }
}

// Integrates over [t0, t0 + t_end] in `steps` equal steps.
void integrate_span(const Rk4& rk, Vector& x, double t0, double t_end, long steps,
                    long stride, long s, CTTrajectory* record) {
  const double h = t_end / double(steps);
  for (long k = 1; k <= steps; ++k) {
    rk.step(x, h);
    const double t = t0 + h * double(k);
    check_blow_up(x, t);
    if (record && (k % stride == 0 || k == steps)) {
      record->t.push_back(t);
      record->x.push_back(x);
      record->s.push_back(s);
    }
  }
}

}  // namespace

CTTrajectory ct_integrate(const CTModelSpec& spec, const Vector& x0, const CTOptions& options) {
  require_same_size(spec.size(), x0.size(), "initial opinions");
  require_assumptions(check_assumptions(spec));

  const double dt = options.dt > 0.0 ? options.dt : default_dt(spec);
  const double t_end = options.t_end > 0.0 ? options.t_end : settle_time(spec);
  if (!(dt > 0.0) || !std::isfinite(dt) || !(t_end > 0.0) || !std::isfinite(t_end)) {
    throw Error(ErrorCode::kInvalidArgument, "dt and t_end must be positive and finite");
  }
  const long steps = std::max(1L, std::lround(t_end / dt));
  const long stride =
      options.record_stride > 0 ? options.record_stride : std::max(1L, steps / 1000);

  const Matrix a = spec.system_matrix();
  CTTrajectory traj;
  traj.t.push_back(0.0);
  traj.x.push_back(x0);
  traj.s.push_back(1);
  Vector x = x0;

  if (spec.kind != Dynamics::kConcatSFJ) {
    Rk4 rk{a, Vector::Zero(x0.size())};
    if (spec.kind == Dynamics::kSFJ) rk.b = spec.theta->values().cwiseProduct(x0);
    integrate_span(rk, x, 0.0, t_end, steps, stride, 1, &traj);
    return traj;
  }

  // Concatenated: each discussion restarts the SFJ flow from the previous limit.
  traj.converged = false;
  double residual = std::numeric_limits<double>::infinity();
  for (long s = 1; s <= options.max_discussions; ++s) {
    const Vector start = x;
    Rk4 rk{a, spec.theta->values().cwiseProduct(start)};
    integrate_span(rk, x, t_end * double(s - 1), t_end, steps, stride, s, nullptr);
    traj.t.push_back(t_end * double(s));
    traj.x.push_back(x);
    traj.s.push_back(s + 1);
    residual = (x - start).cwiseAbs().maxCoeff();
    if (residual < options.outer_tol) {
      traj.converged = true;
      break;
    }
  }
  if (!traj.converged && !options.allow_partial) {
    throw Error(ErrorCode::kNoConvergence,
                fmt::format("concatenated CT discussions stopped with residual {:.3e}",
                            residual));
  }
  return traj;
}

}  // namespace signedcrowd
