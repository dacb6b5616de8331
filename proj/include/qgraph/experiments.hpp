// Copyright 2026 The qgraph Authors
// SPDX-License-Identifier: Apache-2.0
//
// Config-driven experiment runner. A config names one experiment, its
// parameters, a seed and output paths; a run produces a JSON report with
// tabular figure blocks, each of which can be emitted as CSV.
//
// Config document:
//   {"experiment": "pea", "seed": 7, "params": {...},
//    "output": {"report": "out/pea.json", "csv_dir": "out"}}
// Every key except "experiment" is optional. Unknown keys and wrongly typed
// parameters are rejected.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "qgraph/types.hpp"

namespace qg {

// Schema violations: unknown experiment, unknown or mistyped key.
struct ConfigError : Error {
  using Error::Error;
};

inline constexpr std::uint64_t kDefaultSeed = 42;

struct ExperimentConfig {
  std::string experiment;
  nlohmann::json params = nlohmann::json::object();  // as given
  std::optional<std::uint64_t> seed;
  std::string report_path;  // empty: report to stdout
  std::string csv_dir;      // empty: no CSV files

  // Throws ConfigError.
  static ExperimentConfig from_json(const nlohmann::json& j);
};

struct ParamSpec {
  std::string key;
  std::string type;  // "number", "integer", "bool", "string", "numbers", "integers", "strings"
  nlohmann::json default_value;
  std::string help;
};

struct ExperimentInfo {
  std::string name;
  std::string summary;
  std::vector<std::string> figures;
  std::vector<ParamSpec> params;
};

const std::vector<ExperimentInfo>& experiment_catalog();

// Parameters with defaults filled in. Throws ConfigError.
nlohmann::json resolve_params(const std::string& experiment, const nlohmann::json& params);

struct ExperimentReport {
  nlohmann::json json;  // artifact, experiment, seed, config, status, figures, summary[, error]
  bool ok() const { return json.value("status", "") == "ok"; }
};

// Seed precedence: override, then config, then kDefaultSeed. Throws
// ConfigError before running anything when the config is invalid. Runtime
// failures are caught and reported with status "error", keeping the figure
// blocks finished before the failure.
ExperimentReport run_experiment(const ExperimentConfig& config,
                                std::optional<std::uint64_t> seed_override = std::nullopt);

// CSV for one figure block: header row of column names, numbers printed with
// 12 significant digits. Throws Error when the block is missing.
std::string emit_plot_data(const nlohmann::json& report, const std::string& figure);

std::string artifact_version();

}  // namespace qg
