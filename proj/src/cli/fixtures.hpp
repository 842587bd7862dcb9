#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "cli/io.hpp"
#include "signedcrowd/dynamics_dt.hpp"
#include "signedcrowd/wisdom.hpp"

namespace signedcrowd::cli {

std::filesystem::path default_data_dir();

/// Bundled inputs of one worked example plus its expected values.
class Fixture {
 public:
  static Fixture load(int id, const std::filesystem::path& data_dir = default_data_dir());

  int id() const { return id_; }
  const std::string& title() const { return title_; }
  const Json& checks() const { return json_.at("checks"); }

  InteractionMatrix matrix(const std::string& name) const;
  StubbornnessProfile theta(const std::string& name) const;
  BeliefModel belief(const std::string& name) const;
  const std::filesystem::path& path() const { return path_; }

 private:
  int id_ = 0;
  std::string title_;
  Json json_;
  std::filesystem::path path_;
};

struct CheckOutcome {
  std::string name;
  Json expected;
  Json actual;
  double delta = 0.0;  // max abs difference for numeric checks
  bool passed = false;
  std::string error;
};

struct ExampleOutcome {
  int id = 0;
  std::string title;
  std::vector<CheckOutcome> checks;

  bool all_passed() const;
};

/// |delta| <= 5e-3 or |delta| <= 1e-2 |expected|.
bool within_reproduction_tolerance(double expected, double actual);

/// Evaluates one check object of a fixture (see data/examples/README.md).
CheckOutcome evaluate_check(const Fixture& fixture, const Json& check);

ExampleOutcome run_example(int id, const std::filesystem::path& data_dir = default_data_dir());

}  // namespace signedcrowd::cli
