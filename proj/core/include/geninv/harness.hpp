#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "geninv/io.hpp"

namespace geninv {

// Effective numeric settings for one experiment run; overrides come from the
// config's "tolerances" map and are echoed into every report.
struct EffectiveTolerances {
  double rank_tol = 0.0;  // 0 selects the adaptive default
  double margin = kNeighborhoodMargin;
  double angle_tol = kAngleTol;
  double direct_sum_tol = kDirectSumTol;

  static EffectiveTolerances from_json(const Json& overrides);
  Json to_json() const;
};

struct ExperimentConfig {
  std::string experiment;
  Json inputs = Json::object();
  Json tolerances = Json::object();
  std::string output_path = ".";
  std::uint64_t seed = 1;  // fully determines every random draw
};

/// Registered experiment runners.
const std::vector<std::string>& experiment_names();

/// Validates a JSON config document and fills defaults. Throws ParseError
/// with field diagnostics, or UnknownExperiment for unregistered names.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);

struct ExperimentResult {
  Json summary;                           // also written as report.json
  bool check_passed = true;               // meaningful when check was requested
  std::vector<std::string> files_written;
};

/// Runs the named experiment, writes its report files under
/// config.output_path and returns the structured summary. With `check` the
/// experiment's acceptance thresholds are evaluated into check_passed.
ExperimentResult run_experiment(const ExperimentConfig& config, bool check = false);

}  // namespace geninv
