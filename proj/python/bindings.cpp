#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "signedcrowd/dynamics_ct.hpp"
#include "signedcrowd/error.hpp"
#include "signedcrowd/dynamics_dt.hpp"
#include "signedcrowd/montecarlo.hpp"
#include "signedcrowd/spectral.hpp"
#include "signedcrowd/wisdom.hpp"

namespace py = pybind11;
using namespace signedcrowd;

namespace {

Dynamics dynamics_of(const std::string& name) {
  if (name == "degroot") return Dynamics::kDeGroot;
  if (name == "sfj") return Dynamics::kSFJ;
  if (name == "concat") return Dynamics::kConcatSFJ;
  throw Error(ErrorCode::kInvalidArgument, "unknown dynamics '" + name + "'");
}

Partite partite_of(const std::string& name) {
  if (name == "unipartite") return Partite::kUnipartite;
  if (name == "bipartite") return Partite::kBipartite;
  throw Error(ErrorCode::kInvalidArgument, "unknown partite class '" + name + "'");
}

Aggregator aggregator_of(const std::string& name) {
  if (name == "pop") return Aggregator::kPopulation;
  if (name == "group") return Aggregator::kBipartition;
  throw Error(ErrorCode::kInvalidArgument, "unknown aggregator '" + name + "'");
}

std::optional<StubbornnessProfile> theta_of(const std::optional<Vector>& theta) {
  if (!theta) return std::nullopt;
  return StubbornnessProfile(*theta);
}

BeliefModel belief_of(double zeta, const Matrix& sigma) {
  return BeliefModel::from_covariance(zeta, sigma);
}

py::dict certificate_dict(const SpectralCertificate& c) {
  py::dict d;
  d["class"] = std::string(to_string(c.cls));
  d["status"] = std::string(to_string(c.status));
  d["lambda"] = c.lambda_dom;
  d["gap"] = c.gap;
  d["v"] = c.v_right;
  d["z"] = c.z_left;
  return d;
}

py::dict equilibrium_dict(const EquilibriumResult& eq) {
  py::dict d;
  d["x_star"] = eq.x_star;
  d["social_power"] = eq.social_power;
  d["signature"] = eq.signature;
  d["propagator"] = eq.propagator;
  d["mean_factor"] = eq.mean_factor;
  d["aggregator"] = std::string(to_string(eq.aggregator));
  d["warnings"] = eq.warnings;
  return d;
}

py::dict wisdom_dict(const WisdomReport& r) {
  py::dict d;
  d["mean_value"] = r.mean_value;
  d["mean_accurate"] = r.mean_accurate;
  d["initial_variance"] = r.initial_variance;
  d["final_variance"] = r.final_variance;
  d["classification"] = std::string(to_string(r.classification));
  d["region"] = std::string(to_string(r.region.label));
  d["region_class"] = std::string(to_string(r.region_class));
  d["y_star"] = r.optimum.y;
  d["var_star"] = r.optimum.var_star;
  d["optimum_gap"] = r.optimum_gap;
  d["social_power"] = r.equilibrium.social_power;
  d["warnings"] = r.warnings;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  py::register_exception<Error>(m, "SignedCrowdError", PyExc_ValueError);

  m.def("certify", [](const Matrix& w) { return certificate_dict(certify(InteractionMatrix(w))); },
        py::arg("w"));

  m.def("gauge_transform",
        [](const Matrix& w, const Vector& v) {
          return gauge_transform(InteractionMatrix(w), Signature(v)).entries();
        },
        py::arg("w"), py::arg("v"));

  m.def("signed_laplacian",
        [](const Matrix& a) { return signed_laplacian(InteractionMatrix(a)).entries(); },
        py::arg("a"));

  m.def("fj_propagator",
        [](const Matrix& w, const Vector& theta) {
          return fj_propagator(w, StubbornnessProfile(theta));
        },
        py::arg("w"), py::arg("theta"));

  m.def("equilibrium",
        [](const std::string& dynamics, const std::string& partite, const Matrix& w,
           const Vector& x0, std::optional<Vector> theta, const std::string& aggregator) {
          const ModelKind kind{dynamics_of(dynamics), TimeDomain::kDiscrete, partite_of(partite)};
          return equilibrium_dict(equilibrium(kind, InteractionMatrix(w), theta_of(theta), x0,
                                              aggregator_of(aggregator)));
        },
        py::arg("dynamics"), py::arg("partite"), py::arg("w"), py::arg("x0"),
        py::arg("theta") = py::none(), py::arg("aggregator") = "pop");

  m.def("ct_equilibrium",
        [](const std::string& dynamics, const std::string& partite, const Matrix& l,
           const Vector& x0, std::optional<Vector> theta, const std::string& aggregator) {
          const CTModelSpec spec(SignedLaplacian(l), theta_of(theta), dynamics_of(dynamics),
                                 partite_of(partite));
          return equilibrium_dict(ct_equilibrium(spec, x0, aggregator_of(aggregator)));
        },
        py::arg("dynamics"), py::arg("partite"), py::arg("l"), py::arg("x0"),
        py::arg("theta") = py::none(), py::arg("aggregator") = "pop");

  m.def("simulate",
        [](const std::string& dynamics, const std::string& partite, const Matrix& w,
           const Vector& x0, std::optional<Vector> theta, long max_steps) {
          const ModelKind kind{dynamics_of(dynamics), TimeDomain::kDiscrete, partite_of(partite)};
          SimulationOptions opt;
          opt.max_steps = max_steps;
          const Trajectory traj = simulate(kind, InteractionMatrix(w), theta_of(theta), x0, opt);
          Matrix out(Index(traj.states.size()), x0.size());
          for (std::size_t k = 0; k < traj.states.size(); ++k)
            out.row(Index(k)) = traj.states[k].x.transpose();
          return out;
        },
        py::arg("dynamics"), py::arg("partite"), py::arg("w"), py::arg("x0"),
        py::arg("theta") = py::none(), py::arg("max_steps") = 1'000'000);

  m.def("wisdom_report",
        [](const std::string& dynamics, const std::string& partite, const Matrix& w,
           double zeta, const Matrix& sigma, std::optional<Vector> theta,
           const std::string& aggregator) {
          const ModelKind kind{dynamics_of(dynamics), TimeDomain::kDiscrete, partite_of(partite)};
          return wisdom_dict(wisdom_report(kind, InteractionMatrix(w), theta_of(theta),
                                           belief_of(zeta, sigma), aggregator_of(aggregator)));
        },
        py::arg("dynamics"), py::arg("partite"), py::arg("w"), py::arg("zeta"),
        py::arg("sigma"), py::arg("theta") = py::none(), py::arg("aggregator") = "pop");

  m.def("optimal_social_power",
        [](const std::string& label, double zeta, const Matrix& sigma,
           std::optional<Vector> v) {
          const auto parsed = parse_region_label(label);
          if (!parsed) throw Error(ErrorCode::kInvalidArgument, "unknown region '" + label + "'");
          std::optional<Signature> sig;
          if (v) sig = Signature(*v);
          const OptimalPoint opt =
              optimal_social_power(make_region(*parsed, belief_of(zeta, sigma), sig));
          return py::make_tuple(opt.y, opt.var_star);
        },
        py::arg("region"), py::arg("zeta"), py::arg("sigma"), py::arg("v") = py::none());

  m.def("monte_carlo",
        [](const std::string& dynamics, const std::string& partite, const Matrix& w,
           double zeta, const Matrix& sigma, std::optional<Vector> theta,
           const std::string& aggregator, long trials, std::uint64_t seed,
           const std::string& distribution) {
          const ModelKind kind{dynamics_of(dynamics), TimeDomain::kDiscrete, partite_of(partite)};
          const auto dist = parse_distribution(distribution);
          if (!dist) throw Error(ErrorCode::kInvalidArgument, "unknown distribution");
          SampleConfig cfg{trials, seed, *dist, belief_of(zeta, sigma), 0};
          const EmpiricalResult r = empirical_wisdom(cfg, kind, InteractionMatrix(w),
                                                     theta_of(theta), aggregator_of(aggregator));
          py::dict d;
          d["mean_hat"] = r.mean_hat;
          d["var_hat"] = r.var_hat;
          d["ci_halfwidth"] = r.ci_halfwidth;
          d["mean_ci_halfwidth"] = r.mean_ci_halfwidth;
          d["analytic_mean"] = r.analytic_mean;
          d["analytic_var"] = r.analytic_var;
          d["mean_within_ci"] = r.mean_within_ci();
          d["var_within_ci"] = r.var_within_ci();
          return d;
        },
        py::arg("dynamics"), py::arg("partite"), py::arg("w"), py::arg("zeta"),
        py::arg("sigma"), py::arg("theta") = py::none(), py::arg("aggregator") = "pop",
        py::arg("trials") = 100'000, py::arg("seed") = 12345,
        py::arg("distribution") = "gaussian");
}
