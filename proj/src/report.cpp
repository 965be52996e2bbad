#include "royden/report.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>

#include <fmt/format.h>

#include "royden/error.hpp"

namespace royden {

namespace {

std::string format12(double v) {
  if (!std::isfinite(v)) throw Error(ErrorCode::NonFiniteValue, "non-finite number in report");
  if (v == 0.0) return "0";
  return fmt::format("{:.12g}", v);
}

// Rounds floats and rejects non-finite values anywhere in a JSON tree.
nlohmann::json sanitized(const nlohmann::json& j) {
  if (j.is_number_float()) return round12(j.get<double>());
  if (j.is_object()) {
    nlohmann::json out = nlohmann::json::object();
    for (const auto& [k, v] : j.items()) out[k] = sanitized(v);
    return out;
  }
  if (j.is_array()) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& v : j) out.push_back(sanitized(v));
    return out;
  }
  return j;
}

nlohmann::json cell_json(const Cell& c) {
  return std::visit(
      [](const auto& v) -> nlohmann::json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return nullptr;
        } else if constexpr (std::is_same_v<T, double>) {
          return round12(v);
        } else {
          return v;
        }
      },
      c);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

std::string cell_csv(const Cell& c) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>) {
          return "";
        } else if constexpr (std::is_same_v<T, bool>) {
          return v ? "true" : "false";
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          return std::to_string(v);
        } else if constexpr (std::is_same_v<T, double>) {
          return format12(v);
        } else {
          return csv_field(v);
        }
      },
      c);
}

}  // namespace

double round12(double v) {
  return std::strtod(format12(v).c_str(), nullptr);
}

std::string emit_report(const Report& r, Format format) {
  for (const auto& row : r.rows) {
    if (row.size() != r.columns.size()) throw Error(ErrorCode::ParseError, "report row width mismatch");
  }
  if (format == Format::Csv) {
    std::string out;
    for (std::size_t i = 0; i < r.columns.size(); ++i) out += (i ? "," : "") + csv_field(r.columns[i]);
    out += "\n";
    for (const auto& row : r.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + cell_csv(row[i]);
      out += "\n";
    }
    return out;
  }
  nlohmann::json j = nlohmann::json::object();
  j["command"] = r.command;
  j["config"] = sanitized(r.config);
  j["summary"] = sanitized(r.summary);
  j["version"] = r.version;
  j["columns"] = r.columns;
  nlohmann::json results = nlohmann::json::array();
  for (const auto& row : r.rows) {
    nlohmann::json item = nlohmann::json::object();
    for (std::size_t i = 0; i < row.size(); ++i) item[r.columns[i]] = cell_json(row[i]);
    results.push_back(std::move(item));
  }
  j["results"] = std::move(results);
  if (r.error) j["error"] = *r.error;
  if (r.wall_seconds) j["timing"] = {{"wall_seconds", round12(*r.wall_seconds)}};
  return j.dump(2) + "\n";
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, fmt::format("cannot open '{}' for writing", path));
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::IoError, fmt::format("failed writing '{}'", path));
}

}  // namespace royden
