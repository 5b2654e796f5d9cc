#pragma once

#include "zdq/config.hpp"
#include "zdq/coupling.hpp"
#include "zdq/io.hpp"
#include "zdq/oracle.hpp"

namespace zdq {

// Experiment orchestration behind the CLI subcommands. Every command is
// deterministic given config + seed and writes byte-stable CSV bodies.

struct SolveOutputs {
  CanonicalTriplet triplet;
  CouplingReport coupling;
  double acoe_residual = 0.0;
  double grid_slack = 0.0;  // K1 ||d||_inf |X| / (2n)
};

// Solves the average-cost problem, computes the coupling constants, writes
// triplet.json, coupling.json, expected_tau.csv and summary.txt.
SolveOutputs cmd_solve(const ExperimentConfig& cfg, const std::string& out_dir);

struct ConvergeRow {
  int horizon = 0;
  double value = 0.0;       // finite-horizon average distortion of the policy
  double scaled_gap = 0.0;  // T * (value - gain)
  double k = 0.0;
  bool monte_carlo = false;  // exact evaluation fell back to simulation
};

std::vector<ConvergeRow> cmd_converge(const ExperimentConfig& cfg, const CanonicalTriplet& triplet,
                                      const CouplingReport& coupling, const std::string& out_dir);

struct PeriodicRow {
  double epsilon = 0.0;
  int period = 0;        // ceil(K / epsilon)
  double cost = 0.0;     // exact per-period average distortion from pi*
  double margin = 0.0;   // gain + epsilon - cost
};

PeriodicRow cmd_periodic(const ExperimentConfig& cfg, const CanonicalTriplet& triplet,
                         const CouplingReport& coupling, double epsilon);
void write_periodic_csv(const std::vector<PeriodicRow>& rows, const std::string& out_dir);

struct OracleCheckRow {
  int horizon = 0;
  double dp_value = 0.0;
  double oracle_value = 0.0;
  double gap = 0.0;
};

// finite_horizon_dp against the exhaustive table search, one row per horizon;
// prints a pass/fail line per row.
std::vector<OracleCheckRow> cmd_oracle_check(const ExperimentConfig& cfg,
                                             const std::string& out_dir);

struct SimulateOutputs {
  double mean = 0.0;
  double standard_error = 0.0;
};

SimulateOutputs cmd_simulate(const ExperimentConfig& cfg, const CanonicalTriplet& triplet,
                             const std::string& out_dir);

CouplingReport cmd_couple(const ExperimentConfig& cfg, const std::string& out_dir);

}  // namespace zdq
