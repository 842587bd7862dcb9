#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "signedcrowd/error.hpp"

namespace signedcrowd::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitIo = 1,
  kExitClassNone = 2,
  kExitAssumption = 3,
  kExitNoConvergence = 4,
  kExitMismatch = 5,
};

int exit_code_for(ErrorCode code);

/// SIGNEDCROWD_SEED if set and numeric, else a fixed default.
std::uint64_t default_seed();
inline constexpr std::uint64_t kDefaultSeed = 12345;

struct ModelOptions {
  std::string matrix_file;
  std::string format = "auto";     // auto | json | csv
  std::string model = "degroot";   // degroot | sfj | concat
  std::string time = "dt";         // dt | ct
  std::string partite = "auto";    // auto | unipartite | bipartite
  std::string input = "adjacency"; // ct only: adjacency | laplacian
  std::optional<std::string> theta_file;
};

struct CertifyOptions {
  std::string matrix_file;
  std::string format = "auto";
};

struct AnalyzeOptions {
  ModelOptions model;
  std::string belief_file;
  std::string aggregator = "pop";
};

struct SimulateOptions {
  ModelOptions model;
  std::string x0_file;
  /// DT: inner step cap (discussion cap for concat); CT: integration time.
  std::optional<double> horizon;
  double inner_tol = 1e-10;
  std::optional<double> dt;
  bool iterate_inner = false;
  std::optional<std::string> out;
};

struct MonteCarloOptions {
  ModelOptions model;
  std::string belief_file;
  std::string aggregator = "pop";
  long trials = 100'000;
  std::optional<std::uint64_t> seed;
  std::string distribution = "gaussian";
  unsigned threads = 0;
  std::optional<std::string> out;
};

struct TrajectoryOptions {
  ModelOptions model;
  std::string belief_file;
  std::string aggregator = "pop";
  long discussions = 20;
  std::optional<std::string> out;
};

struct ReproduceOptions {
  int example_id = 0;
  std::optional<std::string> data_dir;
};

int cmd_certify(const CertifyOptions& opts, std::ostream& out, std::ostream& err);
int cmd_analyze(const AnalyzeOptions& opts, std::ostream& out, std::ostream& err);
int cmd_simulate(const SimulateOptions& opts, std::ostream& out, std::ostream& err);
int cmd_montecarlo(const MonteCarloOptions& opts, std::ostream& out, std::ostream& err);
int cmd_trajectory(const TrajectoryOptions& opts, std::ostream& out, std::ostream& err);
int cmd_reproduce(const ReproduceOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace signedcrowd::cli
