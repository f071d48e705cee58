#pragma once

#include <string>

#include "bergman/config.hpp"

namespace bergman::cli {

inline constexpr int kSchemaVersion = 1;
inline constexpr const char* kArtifactVersion = "0.1.0";

struct ReportEnvelope {
  json config_echo;
  std::string experiment;
  double runtime_seconds = 0.0;
  json payload;
  bool pass = false;

  json to_json() const;
};

/// Executes the configured experiment. Throws ConfigError (or propagates
/// evaluation errors) on misconfiguration; pass reflects the configured
/// tolerances and is always derived from the payload.
ReportEnvelope run_experiment(const ExperimentConfig& cfg, int threads);

/// Plot-ready table: header plus one row per sequence entry with columns
/// delta (or j), numerator, denominator, ratio, target; 12 significant
/// digits, '.' decimal separator.
std::string emit_plot_table(const json& payload);

/// CLI entry: load config, run, write the report (json or csv). Returns the
/// process exit status: 0 pass, 1 tolerance failure, 2 configuration error.
int run(const std::string& config_path, const std::string& out_override,
        const std::string& format_override, int threads);

}  // namespace bergman::cli
