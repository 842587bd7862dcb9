#include "cli/fixtures.hpp"

#include <cmath>

#include <fmt/format.h>

#include "signedcrowd/error.hpp"
#include "signedcrowd/montecarlo.hpp"
#include "signedcrowd/spectral.hpp"

namespace signedcrowd::cli {

std::filesystem::path default_data_dir() {
  if (const char* env = std::getenv("SIGNEDCROWD_DATA_DIR")) return env;
  return SIGNEDCROWD_DATA_DIR;
}

Fixture Fixture::load(int id, const std::filesystem::path& data_dir) {
  Fixture f;
  f.path_ = data_dir / "examples" / fmt::format("ex{:02d}.json", id);
  if (!std::filesystem::exists(f.path_)) {
    throw Error(ErrorCode::kInvalidArgument,
                fmt::format("unknown example id {} (no {})", id, f.path_.string()));
  }
  try {
    f.json_ = Json::parse(read_file(f.path_));
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParseError, fmt::format("{}: {}", f.path_.string(), e.what()));
  }
  f.id_ = id;
  f.title_ = f.json_.value("title", fmt::format("Example {}", id));
  return f;
}

namespace {

const Json& section(const Json& j, const char* key, const std::string& name,
                    const std::filesystem::path& path) {
  if (!j.contains(key) || !j.at(key).contains(name)) {
    throw Error(ErrorCode::kParseError,
                fmt::format("{}: no {} entry named '{}'", path.string(), key, name));
  }
  return j.at(key).at(name);
}

Dynamics parse_dynamics(const std::string& s) {
  if (s == "degroot") return Dynamics::kDeGroot;
  if (s == "sfj") return Dynamics::kSFJ;
  if (s == "concat") return Dynamics::kConcatSFJ;
  throw Error(ErrorCode::kParseError, fmt::format("unknown model '{}'", s));
}

Aggregator parse_aggregator(const std::string& s) {
  if (s == "pop") return Aggregator::kPopulation;
  if (s == "group") return Aggregator::kBipartition;
  throw Error(ErrorCode::kParseError, fmt::format("unknown aggregator '{}'", s));
}

struct ModelSetup {
  ModelKind kind;
  InteractionMatrix w;
  std::optional<StubbornnessProfile> theta;
  Aggregator aggregator;
};

ModelSetup model_setup(const Fixture& f, const Json& check) {
  InteractionMatrix w = f.matrix(check.at("matrix").get<std::string>());
  const Dynamics dyn = parse_dynamics(check.value("model", std::string("degroot")));
  std::optional<StubbornnessProfile> theta;
  if (check.contains("theta")) theta = f.theta(check.at("theta").get<std::string>());
  const auto partite = detect_partite(w).value_or(Partite::kUnipartite);
  return {ModelKind{dyn, TimeDomain::kDiscrete, partite}, std::move(w), std::move(theta),
          parse_aggregator(check.value("aggregator", std::string("pop")))};
}

std::optional<Signature> signature_of(const Json& check) {
  if (!check.contains("signature")) return std::nullopt;
  return Signature(vector_from_json(check.at("signature"), "signature"));
}

RegionSpec region_of(const Fixture& f, const Json& check) {
  const auto label = parse_region_label(check.at("region").get<std::string>());
  if (!label) throw Error(ErrorCode::kParseError, "unknown region label");
  return make_region(*label, f.belief(check.at("belief").get<std::string>()), signature_of(check));
}

Json compute(const Fixture& f, const Json& check) {
  const std::string kind = check.at("kind").get<std::string>();
  if (kind == "certify") {
    return std::string(to_string(certify(f.matrix(check.at("matrix").get<std::string>())).cls));
  }
  if (kind == "signature") {
    const auto cert = certify(f.matrix(check.at("matrix").get<std::string>()));
    const auto sig = cert.signature();
    if (!sig) throw Error(ErrorCode::kAssumptionViolated, "matrix has no signature");
    return to_json(sig->values());
  }
  if (kind == "social_power") {
    const ModelSetup m = model_setup(f, check);
    const Vector x0 = Vector::Zero(m.w.size());
    return to_json(equilibrium(m.kind, m.w, m.theta, x0, m.aggregator).social_power);
  }
  if (kind == "mean" || kind == "final_variance" || kind == "classification" ||
      kind == "mean_accurate") {
    const ModelSetup m = model_setup(f, check);
    const WisdomReport r = wisdom_report(m.kind, m.w, m.theta,
                                         f.belief(check.at("belief").get<std::string>()),
                                         m.aggregator);
    if (kind == "mean") return r.mean_value;
    if (kind == "final_variance") return r.final_variance;
    if (kind == "mean_accurate") return r.mean_accurate;
    return std::string(to_string(r.classification));
  }
  if (kind == "initial_variance") {
    return initial_group_variance(f.belief(check.at("belief").get<std::string>()));
  }
  if (kind == "variance_start" || kind == "variance_end" || kind == "variance_limit") {
    const ModelSetup m = model_setup(f, check);
    const long s = check.value("s", 1L);
    const auto traj = variance_trajectory(m.kind, m.w, *m.theta,
                                          f.belief(check.at("belief").get<std::string>()), s,
                                          m.aggregator);
    if (kind == "variance_limit") return traj.limit;
    const VarianceRow& row = traj.rows.at(std::size_t(s - 1));
    return kind == "variance_start" ? row.var_start : row.var_end;
  }
  if (kind == "optimum_y" || kind == "optimum_var") {
    const OptimalPoint opt = optimal_social_power(region_of(f, check));
    if (kind == "optimum_y") return to_json(opt.y);
    return opt.var_star;
  }
  if (kind == "region_nonempty") return region_radius(region_of(f, check)).nonempty;
  if (kind == "kernel_feasible" || kind == "kernel_y" || kind == "kernel_variance") {
    const BeliefModel b = f.belief(check.at("belief").get<std::string>());
    const KernelFeasibility kf = kernel_feasibility(b, Vector::Ones(b.size()), 1.0);
    if (kind == "kernel_feasible") return kf.feasible;
    if (kind == "kernel_y") return to_json(kf.y_star);
    return kf.variance;
  }
  if (kind == "quadratic") {
    const BeliefModel b = f.belief(check.at("belief").get<std::string>());
    return group_variance(vector_from_json(check.at("y"), "y"), b);
  }
  if (kind == "rank_one_index") {
    const auto r = rank_one_structure(f.belief(check.at("belief").get<std::string>()));
    return r.index ? Json(long(*r.index) + 1) : Json(nullptr);
  }
  throw Error(ErrorCode::kParseError, fmt::format("unknown check kind '{}'", kind));
}

}  // namespace

InteractionMatrix Fixture::matrix(const std::string& name) const {
  return InteractionMatrix(matrix_from_json(section(json_, "matrices", name, path_), path_.string()));
}

StubbornnessProfile Fixture::theta(const std::string& name) const {
  return StubbornnessProfile(vector_from_json(section(json_, "thetas", name, path_), path_.string()));
}

BeliefModel Fixture::belief(const std::string& name) const {
  return belief_from_json(section(json_, "beliefs", name, path_), path_.string());
}

bool ExampleOutcome::all_passed() const {
  for (const auto& c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

bool within_reproduction_tolerance(double expected, double actual) {
  const double delta = std::abs(actual - expected);
  return delta <= 5e-3 || delta <= 1e-2 * std::abs(expected);
}

CheckOutcome evaluate_check(const Fixture& fixture, const Json& check) {
  CheckOutcome out;
  out.name = check.value("name", check.value("kind", std::string("?")));
  out.expected = check.at("expected");
  try {
    out.actual = compute(fixture, check);
  } catch (const Error& e) {
    out.error = fmt::format("{}: {}", to_string(e.code()), e.what());
    return out;
  }
  const Json& exp = out.expected;
  const Json& act = out.actual;
  if (exp.is_number() && act.is_number()) {
    out.delta = act.get<double>() - exp.get<double>();
    out.passed = within_reproduction_tolerance(exp.get<double>(), act.get<double>());
  } else if (exp.is_array() && act.is_array() && exp.size() == act.size()) {
    out.passed = true;
    for (std::size_t i = 0; i < exp.size(); ++i) {
      const double d = act[i].get<double>() - exp[i].get<double>();
      if (std::abs(d) > std::abs(out.delta)) out.delta = d;
      out.passed = out.passed && within_reproduction_tolerance(exp[i].get<double>(),
                                                               act[i].get<double>());
    }
  } else {
    out.passed = exp == act;
  }
  return out;
}

ExampleOutcome run_example(int id, const std::filesystem::path& data_dir) {
  const Fixture f = Fixture::load(id, data_dir);
  ExampleOutcome outcome;
  outcome.id = id;
  outcome.title = f.title();
  for (const auto& check : f.checks()) outcome.checks.push_back(evaluate_check(f, check));
  return outcome;
}

}  // namespace signedcrowd::cli
