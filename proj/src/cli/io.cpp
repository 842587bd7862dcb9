#include "cli/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>

#include "signedcrowd/error.hpp"

namespace signedcrowd::cli {

namespace {

[[noreturn]] void parse_error(const std::string& origin, const std::string& what) {
  throw Error(ErrorCode::kParseError, fmt::format("{}: {}", origin, what));
}

std::string_view trim(std::string_view s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string_view::npos) return {};
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::optional<double> parse_number(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return std::nullopt;
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

std::vector<std::vector<double>> parse_csv_rows(const std::string& text, const std::string& origin) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (trim(line).empty()) continue;
    std::vector<double> row;
    std::string_view rest(line);
    Index col = 0;
    while (true) {
      ++col;
      const auto comma = rest.find(',');
      const std::string_view cell = rest.substr(0, comma);
      const auto value = parse_number(cell);
      if (!value) {
        parse_error(origin, fmt::format("row {}, column {}: '{}' is not a number",
                                        rows.size() + 1, col, trim(cell)));
      }
      row.push_back(*value);
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

bool looks_like_json(const std::string& text) {
  const auto t = trim(text);
  return !t.empty() && (t.front() == '{' || t.front() == '[');
}

Json parse_json(const std::string& text, const std::string& origin) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    parse_error(origin, fmt::format("invalid JSON ({})", e.what()));
  }
}

double number_from_json(const Json& j, const std::string& origin, const std::string& where) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "Infinity") return INFINITY;
    if (s == "-Infinity") return -INFINITY;
    if (s == "NaN") return NAN;
    if (auto v = parse_number(s)) return *v;
  }
  parse_error(origin, fmt::format("{}: expected a number", where));
}

Matrix square_from_rows(const std::vector<std::vector<double>>& rows, const std::string& origin) {
  const Index n = Index(rows.size());
  if (n == 0) parse_error(origin, "matrix has no rows");
  Matrix m(n, n);
  for (Index i = 0; i < n; ++i) {
    if (Index(rows[i].size()) != n) {
      parse_error(origin, fmt::format("row {} has {} entries, expected {}", i + 1,
                                      rows[i].size(), n));
    }
    for (Index j = 0; j < n; ++j) m(i, j) = rows[i][j];
  }
  return m;
}

}  // namespace

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kParseError, fmt::format("cannot read '{}'", path.string()));
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Matrix matrix_from_json(const Json& j, const std::string& origin) {
  const Json* rows = &j;
  if (j.is_object()) {
    if (!j.contains("rows")) parse_error(origin, "matrix object needs a \"rows\" array");
    rows = &j.at("rows");
  }
  if (!rows->is_array()) parse_error(origin, "\"rows\" must be an array of arrays");
  std::vector<std::vector<double>> data;
  for (std::size_t i = 0; i < rows->size(); ++i) {
    const Json& row = (*rows)[i];
    if (!row.is_array()) parse_error(origin, fmt::format("row {} is not an array", i + 1));
    std::vector<double> values;
    for (std::size_t k = 0; k < row.size(); ++k) {
      values.push_back(number_from_json(row[k], origin,
                                        fmt::format("row {}, column {}", i + 1, k + 1)));
    }
    data.push_back(std::move(values));
  }
  if (j.is_object() && j.contains("n")) {
    const Json& n = j.at("n");
    if (!n.is_number_integer() || n.get<long>() != long(data.size())) {
      parse_error(origin, fmt::format("\"n\" = {} does not match {} rows", n.dump(), data.size()));
    }
  }
  return square_from_rows(data, origin);
}

Matrix parse_matrix_text(const std::string& text, InputFormat format, const std::string& origin) {
  const bool json = format == InputFormat::kJson ||
                    (format == InputFormat::kAuto && looks_like_json(text));
  if (json) return matrix_from_json(parse_json(text, origin), origin);
  return square_from_rows(parse_csv_rows(text, origin), origin);
}

Matrix read_matrix(const std::filesystem::path& path, InputFormat format) {
  return parse_matrix_text(read_file(path), format, path.string());
}

Vector vector_from_json(const Json& j, const std::string& origin) {
  const Json* arr = &j;
  if (j.is_object()) {
    arr = nullptr;
    for (const char* key : {"values", "x0", "theta", "y"}) {
      if (j.contains(key)) {
        arr = &j.at(key);
        break;
      }
    }
    if (!arr) parse_error(origin, "expected an array or {\"values\": [...]}");
  }
  if (!arr->is_array()) parse_error(origin, "expected an array of numbers");
  Vector v(Index(arr->size()));
  for (std::size_t i = 0; i < arr->size(); ++i) {
    v(Index(i)) = number_from_json((*arr)[i], origin, fmt::format("entry {}", i + 1));
  }
  return v;
}

Vector parse_vector_text(const std::string& text, const std::string& origin) {
  if (looks_like_json(text)) return vector_from_json(parse_json(text, origin), origin);
  const auto rows = parse_csv_rows(text, origin);
  std::vector<double> flat;
  if (rows.size() == 1) {
    flat = rows.front();
  } else {
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != 1) {
        parse_error(origin, fmt::format("row {} has {} entries; use one row or one column",
                                        i + 1, rows[i].size()));
      }
      flat.push_back(rows[i][0]);
    }
  }
  if (flat.empty()) parse_error(origin, "empty vector");
  return Eigen::Map<Vector>(flat.data(), Index(flat.size()));
}

Vector read_vector(const std::filesystem::path& path) {
  return parse_vector_text(read_file(path), path.string());
}

BeliefModel belief_from_json(const Json& j, const std::string& origin) {
  if (!j.is_object()) parse_error(origin, "belief file must be a JSON object");
  if (!j.contains("zeta")) parse_error(origin, "belief needs \"zeta\"");
  const double zeta = number_from_json(j.at("zeta"), origin, "zeta");
  if (j.contains("Sigma")) return BeliefModel::from_covariance(zeta, matrix_from_json(j.at("Sigma"), origin));
  if (!j.contains("sigma2")) parse_error(origin, "belief needs \"sigma2\" or \"Sigma\"");
  const Vector sigma2 = vector_from_json(j.at("sigma2"), origin);
  if (!j.contains("rho")) return BeliefModel::independent(zeta, sigma2);
  return BeliefModel::from_correlations(zeta, sigma2, matrix_from_json(j.at("rho"), origin));
}

BeliefModel read_belief(const std::filesystem::path& path) {
  const std::string origin = path.string();
  return belief_from_json(parse_json(read_file(path), origin), origin);
}

std::string format_double(double x) {
  if (std::isnan(x)) return "NaN";
  if (std::isinf(x)) return x > 0 ? "Infinity" : "-Infinity";
  return fmt::format("{:.16e}", x);
}

Json to_json(const Vector& v) {
  Json arr = Json::array();
  for (Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
  return arr;
}

Json to_json(const Matrix& m) {
  Json arr = Json::array();
  for (Index i = 0; i < m.rows(); ++i) arr.push_back(to_json(Vector(m.row(i).transpose())));
  return arr;
}

namespace {

bool is_flat(const Json& j) {
  for (const auto& e : j) {
    if (e.is_structured()) return false;
  }
  return true;
}

void write(std::string& out, const Json& j, int indent, int depth) {
  const std::string pad(std::size_t(indent * (depth + 1)), ' ');
  const std::string close_pad(std::size_t(indent * depth), ' ');
  switch (j.type()) {
    case Json::value_t::number_float: {
      const double x = j.get<double>();
      out += std::isfinite(x) ? format_double(x) : "\"" + format_double(x) + "\"";
      return;
    }
    case Json::value_t::array:
      if (j.empty() || is_flat(j)) {
        out += '[';
        for (std::size_t i = 0; i < j.size(); ++i) {
          if (i) out += ", ";
          write(out, j[i], indent, depth + 1);
        }
        out += ']';
        return;
      }
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        out += pad;
        write(out, j[i], indent, depth + 1);
        out += i + 1 < j.size() ? ",\n" : "\n";
      }
      out += close_pad + "]";
      return;
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      std::size_t i = 0;
      for (auto it = j.begin(); it != j.end(); ++it, ++i) {
        out += pad + Json(it.key()).dump() + ": ";
        write(out, it.value(), indent, depth + 1);
        out += i + 1 < j.size() ? ",\n" : "\n";
      }
      out += close_pad + "}";
      return;
    }
    default:
      out += j.dump();
  }
}

}  // namespace

std::string dump(const Json& j, int indent) {
  std::string out;
  write(out, j, indent, 0);
  out += '\n';
  return out;
}

Json RunManifest::to_json() const {
  Json j;
  j["command"] = command;
  j["inputs"] = inputs;
  Json params = Json::object();
  for (const auto& [k, v] : parameters) params[k] = v;
  j["parameters"] = params;
  j["outputs"] = outputs;
  j["tool_version"] = SIGNEDCROWD_VERSION;
  j["seed"] = seed ? Json(*seed) : Json(nullptr);
  return j;
}

std::string to_csv(const std::vector<std::string>& header,
                   const std::vector<std::vector<double>>& rows) {
  std::string out;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out += ',';
    out += header[i];
  }
  out += '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_double(row[i]);
    }
    out += '\n';
  }
  return out;
}

void write_with_sidecar(const std::filesystem::path& path, const std::string& content,
                        const RunManifest& manifest) {
  {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::kParseError, fmt::format("cannot write '{}'", path.string()));
    out << content;
  }
  std::filesystem::path sidecar = path;
  sidecar += ".manifest.json";
  std::ofstream out(sidecar, std::ios::binary);
  if (!out) throw Error(ErrorCode::kParseError, fmt::format("cannot write '{}'", sidecar.string()));
  out << dump(manifest.to_json());
}

}  // namespace signedcrowd::cli
