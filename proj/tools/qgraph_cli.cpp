// Copyright 2026 The qgraph Authors
// SPDX-License-Identifier: Apache-2.0
//
// qgraph run <config.json> [--seed N] [--report PATH] [--csv-dir DIR]
// qgraph emit <report.json> <figure> [-o FILE]
// qgraph list
//
// Exit codes: 0 success, 1 runtime failure (report written with status
// "error"), 2 invalid config or arguments (nothing written).

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "json.hpp"
#include "qgraph/experiments.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

constexpr int kRuntimeFailure = 1;
constexpr int kConfigError = 2;

json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw qg::ConfigError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw qg::ConfigError(path + ": " + e.what());
  }
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw qg::Error("cannot write " + path.string());
  out << text;
}

int cmd_run(const std::string& config_path, std::optional<std::uint64_t> seed, std::string report_path,
            std::string csv_dir) {
  qg::ExperimentConfig config;
  try {
    config = qg::ExperimentConfig::from_json(read_json(config_path));
  } catch (const qg::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfigError;
  }
  if (report_path.empty()) report_path = config.report_path;
  if (csv_dir.empty()) csv_dir = config.csv_dir;

  const auto start = std::chrono::steady_clock::now();
  const qg::ExperimentReport report = qg::run_experiment(config, seed);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  const std::string text = report.json.dump(2) + "\n";
  if (report_path.empty()) {
    std::cout << text;
  } else {
    write_file(report_path, text);
    // Timing lives beside the report so the report itself stays reproducible.
    write_file(report_path + ".timing.json",
               json{{"experiment", config.experiment}, {"wall_seconds", seconds}}.dump(2) + "\n");
  }
  if (!csv_dir.empty()) {
    for (const auto& [id, block] : report.json.at("figures").items()) {
      write_file(fs::path(csv_dir) / (config.experiment + "_" + id + ".csv"), qg::emit_plot_data(report.json, id));
    }
  }
  std::cerr << config.experiment << ": " << report.json.at("status").get<std::string>() << " in " << seconds
            << " s\n";
  if (!report.ok()) {
    std::cerr << "error: " << report.json.at("error").at("message").get<std::string>() << '\n';
    return kRuntimeFailure;
  }
  return 0;
}

int cmd_emit(const std::string& report_path, const std::string& figure, const std::string& out_path) {
  json report;
  try {
    report = read_json(report_path);
  } catch (const qg::ConfigError& e) {
    std::cerr << e.what() << '\n';
    return kConfigError;
  }
  std::string csv;
  try {
    csv = qg::emit_plot_data(report, figure);
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    return kConfigError;
  }
  if (out_path.empty()) {
    std::cout << csv;
  } else {
    write_file(out_path, csv);
  }
  return 0;
}

int cmd_list() {
  for (const auto& e : qg::experiment_catalog()) {
    std::cout << e.name << "  " << e.summary << "\n  figures:";
    for (const auto& f : e.figures) std::cout << ' ' << f;
    std::cout << '\n';
    for (const auto& p : e.params) {
      std::cout << "  " << p.key << " (" << p.type << ", default " << p.default_value.dump() << ")  " << p.help
                << '\n';
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qgraph experiment runner"};
  app.require_subcommand(1);
  app.set_version_flag("--version", qg::artifact_version());

  std::string config_path, report_path, csv_dir, emit_report, figure, out_path;
  std::optional<std::uint64_t> seed;

  auto* run = app.add_subcommand("run", "run an experiment from a JSON config");
  run->add_option("config", config_path, "config file")->required();
  run->add_option("--seed", seed, "overrides the config seed");
  run->add_option("--report", report_path, "report path (default: config output.report, else stdout)");
  run->add_option("--csv-dir", csv_dir, "write every figure block as CSV here");

  auto* emit = app.add_subcommand("emit", "print one figure block of a report as CSV");
  emit->add_option("report", emit_report, "report file")->required();
  emit->add_option("figure", figure, "figure block id")->required();
  emit->add_option("-o,--output", out_path, "write to a file instead of stdout");

  app.add_subcommand("list", "list experiments and their parameters");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kConfigError;
  }

  try {
    if (*run) return cmd_run(config_path, seed, report_path, csv_dir);
    if (*emit) return cmd_emit(emit_report, figure, out_path);
    return cmd_list();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeFailure;
  }
}
