#include "cli/commands.hpp"

#include <charconv>
#include <cstdlib>
#include <ostream>

#include <fmt/format.h>

#include "cli/fixtures.hpp"
#include "cli/io.hpp"
#include "signedcrowd/dynamics_ct.hpp"
#include "signedcrowd/dynamics_dt.hpp"
#include "signedcrowd/montecarlo.hpp"
#include "signedcrowd/spectral.hpp"
#include "signedcrowd/wisdom.hpp"

namespace signedcrowd::cli {

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kAssumptionViolated:
    case ErrorCode::kDegenerateStubbornness:
    case ErrorCode::kSingularMatrix:
    case ErrorCode::kSingularCovariance:
    case ErrorCode::kEmptyRegion:
      return kExitAssumption;
    case ErrorCode::kNoConvergence:
    case ErrorCode::kNonConvergence:
    case ErrorCode::kStepSizeUnstable:
      return kExitNoConvergence;
    default:
      return kExitIo;
  }
}

std::uint64_t default_seed() {
  if (const char* env = std::getenv("SIGNEDCROWD_SEED")) {
    std::uint64_t seed = 0;
    const std::string_view s(env);
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), seed);
    if (ec == std::errc() && ptr == s.data() + s.size()) return seed;
  }
  return kDefaultSeed;
}

namespace {

template <typename Fn>
int guarded(std::ostream& err, Fn&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    err << "error (" << to_string(e.code()) << "): " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  }
}

[[noreturn]] void bad_option(const std::string& what) {
  throw Error(ErrorCode::kInvalidArgument, what);
}

InputFormat parse_format(const std::string& s) {
  if (s == "auto") return InputFormat::kAuto;
  if (s == "json") return InputFormat::kJson;
  if (s == "csv") return InputFormat::kCsv;
  bad_option(fmt::format("unknown format '{}'", s));
}

Dynamics parse_dynamics(const std::string& s) {
  if (s == "degroot") return Dynamics::kDeGroot;
  if (s == "sfj") return Dynamics::kSFJ;
  if (s == "concat") return Dynamics::kConcatSFJ;
  bad_option(fmt::format("unknown model '{}'", s));
}

Aggregator parse_aggregator(const std::string& s) {
  if (s == "pop") return Aggregator::kPopulation;
  if (s == "group") return Aggregator::kBipartition;
  bad_option(fmt::format("unknown aggregator '{}'", s));
}

struct ResolvedModel {
  ModelKind kind;
  std::optional<InteractionMatrix> w;
  std::optional<CTModelSpec> ct;
  std::optional<StubbornnessProfile> theta;
  AssumptionReport report;

  Index size() const { return w ? w->size() : ct->size(); }
};

ResolvedModel resolve_model(const ModelOptions& opts) {
  const Matrix m = read_matrix(opts.matrix_file, parse_format(opts.format));
  const Dynamics dyn = parse_dynamics(opts.model);
  if (opts.time != "dt" && opts.time != "ct") bad_option(fmt::format("unknown time '{}'", opts.time));
  const bool ct = opts.time == "ct";

  std::optional<StubbornnessProfile> theta;
  if (opts.theta_file) theta = StubbornnessProfile(read_vector(*opts.theta_file));
  if (dyn != Dynamics::kDeGroot && !theta) {
    bad_option(fmt::format("--theta is required for the {} model", opts.model));
  }

  std::optional<Partite> partite;
  if (opts.partite == "unipartite") partite = Partite::kUnipartite;
  else if (opts.partite == "bipartite") partite = Partite::kBipartite;
  else if (opts.partite != "auto") bad_option(fmt::format("unknown partite '{}'", opts.partite));

  ResolvedModel r{ModelKind{dyn, ct ? TimeDomain::kContinuous : TimeDomain::kDiscrete,
                            Partite::kUnipartite},
                  std::nullopt, std::nullopt, theta, {}};
  if (!ct) {
    r.w = InteractionMatrix(m);
    r.kind.partite = partite ? *partite : detect_partite(*r.w).value_or(Partite::kUnipartite);
    r.report = check_assumptions(r.kind, *r.w, theta);
    return r;
  }

  if (opts.input != "adjacency" && opts.input != "laplacian") {
    bad_option(fmt::format("unknown input kind '{}'", opts.input));
  }
  SignedLaplacian l = opts.input == "laplacian" ? SignedLaplacian(m)
                                                : signed_laplacian(InteractionMatrix(m));
  if (!partite) {
    partite = Partite::kUnipartite;
    const ModelKind uni{Dynamics::kDeGroot, TimeDomain::kContinuous, Partite::kUnipartite};
    const ModelKind bi{Dynamics::kDeGroot, TimeDomain::kContinuous, Partite::kBipartite};
    if (!check_assumptions(uni, l, std::nullopt).all_passed() &&
        check_assumptions(bi, l, std::nullopt).all_passed()) {
      partite = Partite::kBipartite;
    }
  }
  r.kind.partite = *partite;
  r.ct.emplace(std::move(l), theta, dyn, *partite);
  r.report = check_assumptions(*r.ct);
  return r;
}

void add_model_parameters(RunManifest& manifest, const ModelOptions& opts,
                          const ResolvedModel& model) {
  manifest.inputs.push_back(opts.matrix_file);
  if (opts.theta_file) manifest.inputs.push_back(*opts.theta_file);
  manifest.parameters["format"] = opts.format;
  manifest.parameters["model"] = opts.model;
  manifest.parameters["time"] = opts.time;
  manifest.parameters["partite"] = std::string(to_string(model.kind.partite));
  if (model.ct) manifest.parameters["input"] = opts.input;
}

Json assumptions_json(const AssumptionReport& report) {
  Json arr = Json::array();
  for (const auto& c : report.clauses) {
    Json j;
    j["name"] = c.name;
    j["passed"] = c.passed;
    j["value"] = c.value;
    j["detail"] = c.detail;
    arr.push_back(j);
  }
  return arr;
}

int report_assumption_failure(const AssumptionReport& report, std::ostream& err) {
  const auto* failed = report.first_failure();
  err << "assumption violated: " << failed->name << " (" << failed->detail << ")\n";
  return kExitAssumption;
}

Json model_json(const ModelKind& kind, Aggregator aggregator) {
  Json j;
  j["dynamics"] = std::string(to_string(kind.dynamics));
  j["time"] = std::string(to_string(kind.time));
  j["partite"] = std::string(to_string(kind.partite));
  j["aggregator"] = std::string(to_string(aggregator));
  return j;
}

Json certificate_json(const SpectralCertificate& cert) {
  Json j;
  j["lambda"] = cert.lambda_dom;
  j["gap"] = cert.gap;
  j["class"] = std::string(to_string(cert.cls));
  j["status"] = std::string(to_string(cert.status));
  j["v_right"] = to_json(cert.v_right);
  j["z_left"] = to_json(cert.z_left);
  Json spectrum = Json::array();
  for (const auto& ev : cert.spectrum) spectrum.push_back(Json::array({ev.real(), ev.imag()}));
  j["spectrum"] = spectrum;
  return j;
}

// Standard output, or the file plus its manifest sidecar.
void emit(const std::optional<std::string>& path, const std::string& content,
          const RunManifest& manifest, std::ostream& out) {
  if (path) {
    write_with_sidecar(*path, content, manifest);
  } else {
    out << content;
  }
}

}  // namespace

int cmd_certify(const CertifyOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&]() -> int {
    const InteractionMatrix m(read_matrix(opts.matrix_file, parse_format(opts.format)));
    const SpectralCertificate cert = certify(m);
    RunManifest manifest{"certify", {opts.matrix_file}, {{"format", opts.format}}, {}, {}};
    Json j = certificate_json(cert);
    j["manifest"] = manifest.to_json();
    out << dump(j);
    return cert.cls == SpectralClass::kNone ? kExitClassNone : kExitOk;
  });
}

int cmd_analyze(const AnalyzeOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&]() -> int {
    const ResolvedModel model = resolve_model(opts.model);
    const BeliefModel belief = read_belief(opts.belief_file);
    const Aggregator aggregator = parse_aggregator(opts.aggregator);

    RunManifest manifest{"analyze", {}, {}, {}, {}};
    add_model_parameters(manifest, opts.model, model);
    manifest.inputs.push_back(opts.belief_file);
    manifest.parameters["aggregator"] = opts.aggregator;

    Json j;
    j["model"] = model_json(model.kind, aggregator);
    j["assumptions"] = assumptions_json(model.report);
    if (model.report.phi_witness) j["phi_witness"] = *model.report.phi_witness;
    if (!model.report.all_passed()) {
      j["manifest"] = manifest.to_json();
      out << dump(j);
      return report_assumption_failure(model.report, err);
    }

    const WisdomReport r = model.w ? wisdom_report(model.kind, *model.w, model.theta, belief, aggregator)
                                   : wisdom_report(*model.ct, belief, aggregator);
    j["model"]["aggregator"] = std::string(to_string(r.equilibrium.aggregator));
    j["social_power"] = to_json(r.equilibrium.social_power);
    j["signature"] = to_json(r.equilibrium.signature);
    j["mean_factor"] = r.equilibrium.mean_factor;
    j["mean_value"] = r.mean_value;
    j["mean_accurate"] = r.mean_accurate;
    j["initial_variance"] = r.initial_variance;
    j["final_variance"] = r.final_variance;
    j["classification"] = std::string(to_string(r.classification));
    Json region;
    region["label"] = std::string(to_string(r.region.label));
    region["a"] = to_json(r.region.a);
    region["t"] = r.region.t;
    region["c"] = r.region.c;
    region["r2"] = r.radius.r2;
    region["nonempty"] = r.radius.nonempty;
    region["simplex"] = r.region.simplex;
    region["prefactor"] = r.region.prefactor;
    region["membership"] = std::string(to_string(r.region_class));
    j["region"] = region;
    Json optimum;
    optimum["y"] = to_json(r.optimum.y);
    optimum["var_star"] = r.optimum.var_star;
    optimum["singular_covariance"] = r.singular_covariance;
    j["optimum"] = optimum;
    j["optimum_gap"] = r.optimum_gap;
    j["expected_x_star"] = to_json(r.equilibrium.x_star);
    j["warnings"] = r.warnings;
    j["manifest"] = manifest.to_json();
    out << dump(j);
    for (const auto& w : r.warnings) err << "warning: " << w << '\n';
    return kExitOk;
  });
}

int cmd_simulate(const SimulateOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&]() -> int {
    const ResolvedModel model = resolve_model(opts.model);
    const Vector x0 = read_vector(opts.x0_file);
    require_same_size(model.size(), x0.size(), "x0");

    RunManifest manifest{"simulate", {}, {}, {}, {}};
    add_model_parameters(manifest, opts.model, model);
    manifest.inputs.push_back(opts.x0_file);
    if (opts.horizon) manifest.parameters["horizon"] = format_double(*opts.horizon);
    manifest.parameters["inner_tol"] = format_double(opts.inner_tol);
    if (opts.dt) manifest.parameters["dt"] = format_double(*opts.dt);
    if (opts.iterate_inner) manifest.parameters["iterate_inner"] = "true";
    if (opts.out) manifest.outputs.push_back(*opts.out);

    if (!model.report.all_passed()) return report_assumption_failure(model.report, err);

    const Index n = x0.size();
    std::vector<std::string> header;
    if (model.ct) header.emplace_back("t");
    else header.emplace_back(model.kind.dynamics == Dynamics::kConcatSFJ ? "s" : "k");
    for (Index i = 0; i < n; ++i) header.push_back(fmt::format("x_{}", i + 1));

    auto row_of = [](double lead, const Vector& x) {
      std::vector<double> row{lead};
      row.insert(row.end(), x.data(), x.data() + x.size());
      return row;
    };

    std::vector<std::vector<double>> rows;
    bool converged = true;
    std::string failure;
    if (opts.horizon && *opts.horizon == 0.0) {
      rows.push_back(row_of(0.0, x0));
    } else if (model.w) {
      SimulationOptions so;
      so.inner_tol = opts.inner_tol;
      so.outer_tol = opts.inner_tol;
      so.iterate_inner = opts.iterate_inner;
      so.allow_partial = true;
      if (opts.horizon) {
        if (*opts.horizon < 0.0) bad_option("--horizon must be >= 0");
        const long cap = std::lround(*opts.horizon);
        if (model.kind.dynamics == Dynamics::kConcatSFJ) so.max_discussions = cap;
        else so.max_steps = cap;
      }
      const Trajectory traj = simulate(model.kind, *model.w, model.theta, x0, so);
      const bool concat = model.kind.dynamics == Dynamics::kConcatSFJ;
      for (const auto& st : traj.states) {
        rows.push_back(row_of(concat ? double(st.s) : double(st.k), st.x));
      }
      converged = traj.converged;
      if (!converged) {
        failure = fmt::format("no convergence within the horizon (residual {:.3e})", traj.residual);
      }
    } else {
      CTOptions co;
      if (opts.dt) co.dt = *opts.dt;
      if (opts.horizon) {
        if (*opts.horizon < 0.0) bad_option("--horizon must be >= 0");
        co.t_end = *opts.horizon;
      }
      co.outer_tol = opts.inner_tol;
      co.allow_partial = true;
      const CTTrajectory traj = ct_integrate(*model.ct, x0, co);
      for (std::size_t k = 0; k < traj.t.size(); ++k) rows.push_back(row_of(traj.t[k], traj.x[k]));
      converged = traj.converged;
      if (!converged) failure = "concatenated discussions did not settle";
    }

    emit(opts.out, to_csv(header, rows), manifest, out);
    if (!converged) {
      err << "error (NoConvergence): " << failure << '\n';
      return kExitNoConvergence;
    }
    return kExitOk;
  });
}

int cmd_montecarlo(const MonteCarloOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&]() -> int {
    const ResolvedModel model = resolve_model(opts.model);
    const BeliefModel belief = read_belief(opts.belief_file);
    const Aggregator aggregator = parse_aggregator(opts.aggregator);
    const auto distribution = parse_distribution(opts.distribution);
    if (!distribution) bad_option(fmt::format("unknown distribution '{}'", opts.distribution));
    const std::uint64_t seed = opts.seed ? *opts.seed : default_seed();

    RunManifest manifest{"montecarlo", {}, {}, {}, seed};
    add_model_parameters(manifest, opts.model, model);
    manifest.inputs.push_back(opts.belief_file);
    manifest.parameters["aggregator"] = opts.aggregator;
    manifest.parameters["trials"] = std::to_string(opts.trials);
    manifest.parameters["distribution"] = opts.distribution;
    if (opts.out) manifest.outputs.push_back(*opts.out);

    if (!model.report.all_passed()) return report_assumption_failure(model.report, err);

    SampleConfig config{opts.trials, seed, *distribution, belief, opts.threads};
    const EmpiricalResult r = model.w
                                  ? empirical_wisdom(config, model.kind, *model.w, model.theta, aggregator)
                                  : empirical_wisdom(config, *model.ct, aggregator);
    Json j;
    j["mean_hat"] = r.mean_hat;
    j["var_hat"] = r.var_hat;
    j["ci"] = r.ci_halfwidth;
    j["mean_ci"] = r.mean_ci_halfwidth;
    j["analytic_mean"] = r.analytic_mean;
    j["analytic_var"] = r.analytic_var;
    j["mean_within_ci"] = r.mean_within_ci();
    j["var_within_ci"] = r.var_within_ci();
    j["trials"] = r.trials;
    j["seed"] = r.seed;
    j["distribution"] = opts.distribution;
    j["manifest"] = manifest.to_json();
    emit(opts.out, dump(j), manifest, out);
    return kExitOk;
  });
}

int cmd_trajectory(const TrajectoryOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&]() -> int {
    const ResolvedModel model = resolve_model(opts.model);
    const BeliefModel belief = read_belief(opts.belief_file);
    const Aggregator aggregator = parse_aggregator(opts.aggregator);

    RunManifest manifest{"trajectory", {}, {}, {}, {}};
    add_model_parameters(manifest, opts.model, model);
    manifest.inputs.push_back(opts.belief_file);
    manifest.parameters["aggregator"] = opts.aggregator;
    manifest.parameters["discussions"] = std::to_string(opts.discussions);
    if (opts.out) manifest.outputs.push_back(*opts.out);

    if (model.kind.dynamics != Dynamics::kConcatSFJ) bad_option("trajectory needs --model concat");
    if (!model.report.all_passed()) return report_assumption_failure(model.report, err);

    const VarianceTrajectory traj =
        model.w ? variance_trajectory(model.kind, *model.w, *model.theta, belief, opts.discussions,
                                      aggregator)
                : variance_trajectory(*model.ct, belief, opts.discussions, aggregator);
    std::vector<std::vector<double>> rows;
    for (const auto& row : traj.rows) rows.push_back({double(row.s), row.var_start, row.var_end});
    const double inf = std::numeric_limits<double>::infinity();
    rows.push_back({inf, traj.limit, traj.limit});
    emit(opts.out, to_csv({"s", "var_start", "var_end"}, rows), manifest, out);
    return kExitOk;
  });
}

int cmd_reproduce(const ReproduceOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&]() -> int {
    const auto dir = opts.data_dir ? std::filesystem::path(*opts.data_dir) : default_data_dir();
    const ExampleOutcome outcome = run_example(opts.example_id, dir);

    auto show = [](const Json& j) -> std::string {
      if (j.is_number_float()) return fmt::format("{:.4f}", j.get<double>());
      if (j.is_array()) {
        std::string s = "[";
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) s += ", ";
          s += fmt::format("{:.4f}", j[i].get<double>());
        }
        return s + "]";
      }
      if (j.is_string()) return j.get<std::string>();
      return j.dump();
    };

    out << fmt::format("{}\n", outcome.title);
    out << fmt::format("{:<34} {:<30} {:<30} {:>9}  {}\n", "quantity", "expected", "actual",
                       "delta", "status");
    for (const auto& c : outcome.checks) {
      const std::string actual = c.error.empty() ? show(c.actual) : "error";
      const std::string delta =
          (c.expected.is_number() || c.expected.is_array()) && c.error.empty()
              ? fmt::format("{:.4f}", c.delta)
              : "-";
      out << fmt::format("{:<34} {:<30} {:<30} {:>9}  {}\n", c.name, show(c.expected), actual,
                         delta, c.passed ? "PASS" : "FAIL");
      if (!c.error.empty()) out << "    " << c.error << '\n';
    }
    const bool ok = outcome.all_passed();
    out << (ok ? "all checks passed\n" : "mismatch\n");
    return ok ? kExitOk : kExitMismatch;
  });
}

}  // namespace signedcrowd::cli
