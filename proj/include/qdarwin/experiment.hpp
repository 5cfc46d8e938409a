#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "qdarwin/gates.hpp"

namespace qdarwin::harness {

inline constexpr std::string_view kVersion = "0.1.0";

enum class Format { Csv, Json };

const std::vector<std::string>& scenario_catalog();

struct ExperimentConfig {
  std::string scenario;
  int k = 1;
  int n = 6;
  GateSpec gate{pi / 2, pi / 2, pi / 2, 0.0, OperatorOrder::Total};
  std::string initial = "zurek_ground";
  double a_squared = 0.5;
  std::string probabilities = "uniform";  // uniform | linear (p_e proportional to 1..|M|)

  long max_iterations = 1000;
  long checkpoint_stride = 10;
  double epsilon = 1e-9;
  long iterations = 100;  // fixed step count for sweeps

  int orderings = 1;  // 1: right-to-left only; more adds seeded random orderings
  std::uint64_t seed = 0;
  double plateau_tolerance = 0.01;

  std::string out = "out";
  Format format = Format::Csv;
  int threads = 1;

  int sweep_points = 25;
  std::vector<long> schedule{25, 50, 100, 200, 400};
  int n_min = 2;
  int n_max = 10;
  int iterated_max_n = 7;
  std::vector<int> ks{2, 3};
};

// defaults for a scenario before any file values are applied
ExperimentConfig default_config(const std::string& scenario);

// parse YAML-style key: value text; ParseError / ConfigInvalid / RangeError on failure.
// a non-empty scenario replaces the one in the text
ExperimentConfig validate_config(std::string_view raw, const std::string& scenario = "");

// range checks shared by the file parser and command-line overrides
void check_config(const ExperimentConfig& c);

std::string config_json(const ExperimentConfig& c);

struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

struct ConvergenceEntry {
  std::string label;
  long iterations = 0;
  bool converged = false;
  bool required = true;  // false for fixed-N runs
  double last_distance = 0.0;
  bool monotone = true;
};

struct ScenarioResult {
  std::vector<Table> tables;
  std::vector<ConvergenceEntry> convergence;
  std::vector<std::string> notes;

  bool converged() const;
};

struct OutputFile {
  std::string path;
  std::string sha256;
};

struct RunManifest {
  std::string config;  // JSON echo
  std::string version{kVersion};
  double wall_seconds = 0.0;
  std::vector<ConvergenceEntry> convergence;
  std::vector<std::string> notes;
  std::vector<OutputFile> outputs;
  bool converged = true;
};

ScenarioResult compute_scenario(const ExperimentConfig& c);

std::string to_csv(const Table& t);
std::string sha256_hex(std::string_view bytes);

// computes, writes tables (CSV files or one JSON document) and the manifest
RunManifest run_scenario(const ExperimentConfig& c);

}  // namespace qdarwin::harness
