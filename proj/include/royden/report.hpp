#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

namespace royden {

inline constexpr const char* kToolVersion = "0.1.0";

enum class Format { Json, Csv };

/// One table cell. Empty cells (std::monostate) become "" in CSV and null in
/// JSON.
using Cell = std::variant<std::monostate, bool, std::int64_t, double, std::string>;

/// Machine-readable result of one CLI run: a flat table plus free-form
/// summary fields.
struct Report {
  std::string command;
  nlohmann::json config = nlohmann::json::object();
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  nlohmann::json summary = nlohmann::json::object();
  std::optional<std::string> error;
  /// Emitted only when set, so that reports stay byte-stable by default.
  std::optional<double> wall_seconds;
  std::string version = kToolVersion;
};

/// Rounds to 12 significant digits; throws NonFiniteValue on NaN or ±inf.
double round12(double v);

/// JSON has sorted keys and rounded floats; CSV has the report's column
/// order and formats floats with 12 significant digits. Throws
/// NonFiniteValue when any number is NaN or infinite.
std::string emit_report(const Report& r, Format format);

/// Writes the bytes to `path`; throws IoError.
void write_file(const std::string& path, const std::string& bytes);

}  // namespace royden
