#include <iostream>

#include <CLI11.hpp>

#include "cli/commands.hpp"

namespace {

using namespace signedcrowd::cli;

void add_model_flags(CLI::App* cmd, ModelOptions& m) {
  cmd->add_option("matrix", m.matrix_file, "Interaction matrix (JSON or CSV)")->required();
  cmd->add_option("--format", m.format, "Matrix file format")
      ->check(CLI::IsMember({"auto", "json", "csv"}));
  cmd->add_option("--model", m.model, "Dynamics")->check(CLI::IsMember({"degroot", "sfj", "concat"}));
  cmd->add_option("--time", m.time, "Time domain")->check(CLI::IsMember({"dt", "ct"}));
  cmd->add_option("--theta", m.theta_file, "Stubbornness vector file");
  cmd->add_option("--partite", m.partite, "Network class (auto detects from the spectrum)")
      ->check(CLI::IsMember({"auto", "unipartite", "bipartite"}));
  cmd->add_option("--input", m.input, "CT only: matrix is an adjacency A (L = D - A) or L itself")
      ->check(CLI::IsMember({"adjacency", "laplacian"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Signed-network opinion dynamics and wisdom-of-crowds analysis"};
  app.require_subcommand(1);
  app.set_version_flag("--version", SIGNEDCROWD_VERSION);

  CertifyOptions certify;
  auto* c_certify = app.add_subcommand("certify", "Certify SPF / SSPF / eventual positivity");
  c_certify->add_option("matrix", certify.matrix_file, "Matrix file")->required();
  c_certify->add_option("--format", certify.format, "Matrix file format")
      ->check(CLI::IsMember({"auto", "json", "csv"}));

  AnalyzeOptions analyze;
  auto* c_analyze = app.add_subcommand("analyze", "Wisdom-of-crowds report for a model");
  add_model_flags(c_analyze, analyze.model);
  c_analyze->add_option("belief", analyze.belief_file, "Belief file (zeta, Sigma)")->required();
  c_analyze->add_option("--aggregator", analyze.aggregator, "pop (1^T x / n) or group (v^T x / n)")
      ->check(CLI::IsMember({"pop", "group"}));

  SimulateOptions simulate;
  auto* c_simulate = app.add_subcommand("simulate", "Iterate or integrate a model from x0");
  add_model_flags(c_simulate, simulate.model);
  c_simulate->add_option("x0", simulate.x0_file, "Initial opinions")->required();
  c_simulate->add_option("--horizon", simulate.horizon,
                         "DT: step cap (discussions for concat); CT: integration time");
  c_simulate->add_option("--inner-tol", simulate.inner_tol, "Stopping tolerance");
  c_simulate->add_option("--dt", simulate.dt, "CT step size");
  c_simulate->add_flag("--iterate-inner", simulate.iterate_inner,
                       "Concat: iterate each discussion instead of x = P x");
  c_simulate->add_option("--out", simulate.out, "CSV output file (manifest written alongside)");

  MonteCarloOptions mc;
  auto* c_mc = app.add_subcommand("montecarlo", "Empirical mean and variance of the aggregate");
  add_model_flags(c_mc, mc.model);
  c_mc->add_option("belief", mc.belief_file, "Belief file")->required();
  c_mc->add_option("--aggregator", mc.aggregator)->check(CLI::IsMember({"pop", "group"}));
  c_mc->add_option("--trials", mc.trials)->check(CLI::Range(2L, 1'000'000'000L));
  c_mc->add_option("--seed", mc.seed, "Seed (default: $SIGNEDCROWD_SEED or 12345)");
  c_mc->add_option("--distribution", mc.distribution)->check(CLI::IsMember({"gaussian", "uniform"}));
  c_mc->add_option("--threads", mc.threads, "Worker threads (0 = all cores)");
  c_mc->add_option("--out", mc.out, "JSON output file");

  TrajectoryOptions traj;
  auto* c_traj = app.add_subcommand("trajectory", "Variance across concatenated discussions");
  add_model_flags(c_traj, traj.model);
  c_traj->add_option("belief", traj.belief_file, "Belief file")->required();
  c_traj->add_option("--aggregator", traj.aggregator)->check(CLI::IsMember({"pop", "group"}));
  c_traj->add_option("--discussions", traj.discussions)->check(CLI::NonNegativeNumber);
  c_traj->add_option("--out", traj.out, "CSV output file");

  ReproduceOptions reproduce;
  auto* c_reproduce = app.add_subcommand("reproduce", "Check a bundled worked example (1-11)");
  c_reproduce->add_option("example", reproduce.example_id, "Example id")->required();
  c_reproduce->add_option("--data-dir", reproduce.data_dir, "Fixture root (contains examples/)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitIo;
  }

  if (*c_certify) return cmd_certify(certify, std::cout, std::cerr);
  if (*c_analyze) return cmd_analyze(analyze, std::cout, std::cerr);
  if (*c_simulate) return cmd_simulate(simulate, std::cout, std::cerr);
  if (*c_mc) return cmd_montecarlo(mc, std::cout, std::cerr);
  if (*c_traj) return cmd_trajectory(traj, std::cout, std::cerr);
  return cmd_reproduce(reproduce, std::cout, std::cerr);
}
