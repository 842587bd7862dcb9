#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "signedcrowd/types.hpp"
#include "signedcrowd/wisdom.hpp"

namespace signedcrowd::cli {

using Json = nlohmann::ordered_json;

enum class InputFormat { kAuto, kJson, kCsv };

/// Square matrix from {"n": int, "rows": [[...]]} or n lines of n decimals.
Matrix read_matrix(const std::filesystem::path& path, InputFormat format = InputFormat::kAuto);
Matrix parse_matrix_text(const std::string& text, InputFormat format, const std::string& origin);

/// Vector from a JSON array, {"values"|"x0"|"theta": [...]}, or CSV (one row or one column).
Vector read_vector(const std::filesystem::path& path);
Vector parse_vector_text(const std::string& text, const std::string& origin);

/// {"zeta", "sigma2", "rho"?} or {"zeta", "Sigma"}.
BeliefModel read_belief(const std::filesystem::path& path);
BeliefModel belief_from_json(const Json& j, const std::string& origin);

Matrix matrix_from_json(const Json& j, const std::string& origin);
Vector vector_from_json(const Json& j, const std::string& origin);

std::string read_file(const std::filesystem::path& path);

/// 17 significant digits, scientific.
std::string format_double(double x);

Json to_json(const Vector& v);
Json to_json(const Matrix& m);

/// Serializes with every floating value through format_double.
std::string dump(const Json& j, int indent = 2);

struct RunManifest {
  std::string command;
  std::vector<std::string> inputs;
  std::map<std::string, std::string> parameters;
  std::vector<std::string> outputs;
  std::optional<std::uint64_t> seed;

  Json to_json() const;
};

/// CSV with a header row; floats via format_double.
std::string to_csv(const std::vector<std::string>& header,
                   const std::vector<std::vector<double>>& rows);

/// Writes `content` to `path` and the manifest next to it as <path>.manifest.json.
void write_with_sidecar(const std::filesystem::path& path, const std::string& content,
                        const RunManifest& manifest);

}  // namespace signedcrowd::cli
