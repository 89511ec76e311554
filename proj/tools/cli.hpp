#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace nlsb::cli {

/// Everything a run needs, after merging the config file and the flags.
struct RunConfig {
  std::string subcommand;
  std::string g;
  int dimension = 0;
  std::optional<double> lambda;
  double lambda_min = 1e-4;
  double lambda_max = 1e4;
  int points_per_decade = 16;
  std::optional<double> a;
  std::optional<double> exponent;
  double coefficient = 1.0;
  std::string output_dir;
  int jobs = 1;
  /// Shooting tolerance overrides by key, e.g. step_tolerance.
  std::map<std::string, double> overrides;
};

struct ParseResult {
  std::optional<RunConfig> config;
  /// Exit code for a failed parse (or 0 after --help).
  int exit_code = 0;
  std::string message;
};

/// Reads `key = value` lines; `#` starts a comment. Throws
/// std::runtime_error on a line without '='.
std::map<std::string, std::string> read_config_file(const std::string& path);

/// Parses argv (subcommand first), merging an optional --config file below
/// the flags.
ParseResult parse_config(int argc, const char* const* argv);

/// Executes a validated config, writes the artifacts, and returns the
/// process exit code.
int run(const RunConfig& config);

}  // namespace nlsb::cli
