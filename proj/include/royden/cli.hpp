#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "royden/report.hpp"

namespace royden {

enum class Command { Dirichlet, Capacity, Capinf, Extremal, Decompose, Probe, Classify };

std::string to_string(Command c);

struct RunConfig {
  Command command = Command::Capinf;
  std::optional<std::string> family;  // "z", "z2", "z3", "tree:<d>"
  std::optional<std::string> graph;   // file path or "random:<n>:<m>"
  std::vector<double> p{2.0};
  std::vector<int> radii;
  double tol = 0.0;  // 0 selects the solver default
  int max_iter = 20000;
  Format format = Format::Json;
  std::optional<std::string> out;
  std::uint64_t seed = 0;
  /// Plates for graph inputs; {0} and {n-1} when empty.
  std::vector<int> plate_a;
  std::vector<int> plate_b;
  /// Interior set S for graph inputs; all vertices when empty.
  std::vector<int> interior;
  /// Probe directions ("x+", "x-", "branch:<i>"); empty selects defaults.
  std::string plus;
  std::string minus;
  /// probe: "bhd" or "inner".
  std::string mode = "bhd";
  /// decompose: "indicator", "constant" or "bump".
  std::string function = "indicator";
  bool timing = false;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Tokens exclude the program name. Throws UnknownCommand, BadFlag or
/// ConflictingSources.
RunConfig parse_args(const std::vector<std::string>& tokens);

/// Canonical token list; parse_args(to_args(c)) == c.
std::vector<std::string> to_args(const RunConfig& c);

std::string usage();

/// "a:b:xF" (geometric), "a:b:+s" (arithmetic) or a comma list.
std::vector<int> parse_radii(const std::string& text);

struct RunOutcome {
  int exit_code = 0;
  Report report;
  std::string bytes;
};

/// Runs the command and renders the report. Exit code 0 on success, 2 when
/// a solve did not converge, 1 on input errors.
RunOutcome execute(const RunConfig& config);

/// Full CLI entry: parse, run, write to --out or stdout, errors to stderr.
int run_cli(const std::vector<std::string>& tokens);

/// Reads ROYDEN_LOG (off, info, debug; default warn) and routes
/// diagnostics to standard error.
void configure_logging();

}  // namespace royden
