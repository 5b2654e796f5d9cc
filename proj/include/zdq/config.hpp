#pragma once

#include <optional>
#include <string>

#include "zdq/solver.hpp"

namespace zdq {

// One experiment = one config file. Unknown keys are rejected so that a
// config never silently drifts from what actually ran.
struct ExperimentConfig {
  MarkovModel model;
  bool stationary_start = false;  // initial was given as "stationary"
  DistortionSpec distortion;
  int num_symbols = 0;
  std::optional<Channel> channel;  // empty = noiseless pipeline
  int grid_resolution = 50;
  AverageCostMethod method = AverageCostMethod::rvi;
  SolverOptions solver;
  std::vector<int> horizons;
  std::int64_t oracle_cap = 1 << 24;
  std::uint64_t seed = 1;
  int num_runs = 1000;
  std::string out_dir = "out";

  bool operator==(const ExperimentConfig&) const = default;
};

ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text);
std::string serialize_config(const ExperimentConfig& cfg);

}  // namespace zdq
