#include "zdq/commands.hpp"

#include <cmath>
#include <filesystem>
#include <iostream>

#include "zdq/rng.hpp"

namespace zdq {

namespace {

std::shared_ptr<const BeliefGrid> grid_for(const ExperimentConfig& cfg) {
  return BeliefGrid::make(cfg.grid_resolution, cfg.model.num_states);
}

double grid_slack_of(const ExperimentConfig& cfg, const CouplingReport& coupling) {
  return coupling.k1 * cfg.distortion.d_inf * cfg.model.num_states /
         (2.0 * cfg.grid_resolution);
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail(errc::config_error, "cannot create output directory " + dir);
}

std::string channel_summary(const ExperimentConfig& cfg) {
  if (!cfg.channel) return "noiseless";
  return "noisy(" + std::to_string(cfg.channel->input_size()) + "x" +
         std::to_string(cfg.channel->output_size()) + ")";
}

}  // namespace

SolveOutputs cmd_solve(const ExperimentConfig& cfg, const std::string& out_dir) {
  ensure_dir(out_dir);
  SolveOutputs out;
  out.triplet = solve_average_cost(cfg.model, cfg.distortion, cfg.num_symbols, grid_for(cfg),
                                   cfg.method, cfg.solver, cfg.channel);
  out.coupling = make_coupling_report(cfg.model, cfg.distortion);
  out.acoe_residual =
      acoe_residual(out.triplet, cfg.model, cfg.distortion, cfg.num_symbols, cfg.channel);
  out.grid_slack = grid_slack_of(cfg, out.coupling);

  save_triplet(out.triplet, out_dir + "/triplet.json");
  save_coupling(out.coupling, out_dir + "/coupling.json");
  write_text_file(out_dir + "/expected_tau.csv", tau_matrix_csv(out.coupling.expected_tau));

  std::string summary;
  summary += "method=" + std::string(cfg.method == AverageCostMethod::rvi ? "rvi"
                                                                          : "vanishing_discount") + "\n";
  summary += "channel=" + channel_summary(cfg) + "\n";
  summary += "grid_resolution=" + std::to_string(cfg.grid_resolution) + "\n";
  summary += "g_star=" + fmt_g12(out.triplet.gain) + "\n";
  summary += "k1=" + fmt_g12(out.coupling.k1) + "\n";
  summary += "k=" + fmt_g12(out.coupling.k) + "\n";
  summary += "reference_state=" + std::to_string(out.coupling.reference_state + 1) + "\n";
  summary += "acoe_residual=" + fmt_g12(out.acoe_residual) + "\n";
  summary += "grid_slack=" + fmt_g12(out.grid_slack) + "\n";
  write_text_file(out_dir + "/summary.txt", summary);
  std::cout << summary;
  return out;
}

std::vector<ConvergeRow> cmd_converge(const ExperimentConfig& cfg, const CanonicalTriplet& triplet,
                                      const CouplingReport& coupling, const std::string& out_dir) {
  ensure_dir(out_dir);
  std::vector<ConvergeRow> rows;
  for (int horizon : cfg.horizons) {
    ConvergeRow row;
    row.horizon = horizon;
    row.k = coupling.k;
    try {
      row.value = evaluate_policy_exact(triplet, cfg.model, cfg.distortion, horizon,
                                        cfg.model.initial, cfg.channel, cfg.solver.tree_cap);
    } catch (const error& e) {
      if (e.code() != errc::tree_too_large) throw;
      row.value = simulate_policy(triplet, cfg.model, cfg.distortion, cfg.channel, horizon,
                                  cfg.num_runs, cfg.seed)
                      .first;
      row.monte_carlo = true;
    }
    row.scaled_gap = horizon * (row.value - triplet.gain);
    rows.push_back(row);
  }
  std::string csv = "T,J_T,scaled_gap,K,mc\n";
  for (const auto& r : rows)
    csv += std::to_string(r.horizon) + "," + fmt_g12(r.value) + "," + fmt_g12(r.scaled_gap) + "," +
           fmt_g12(r.k) + "," + (r.monte_carlo ? "1" : "0") + "\n";
  write_text_file(out_dir + "/converge.csv", csv);
  return rows;
}

PeriodicRow cmd_periodic(const ExperimentConfig& cfg, const CanonicalTriplet& triplet,
                         const CouplingReport& coupling, double epsilon) {
  if (!(epsilon > 0.0)) fail(errc::config_error, "epsilon must be positive");
  PeriodicRow row;
  row.epsilon = epsilon;
  row.period = std::max(1, static_cast<int>(std::ceil(coupling.k / epsilon)));

  // Stationary start: the per-period cost of the reset policy equals the
  // finite-horizon cost of the stationary policy launched from pi*.
  Belief pi_star = stationary_distribution(cfg.model);
  row.cost = evaluate_policy_exact(triplet, cfg.model, cfg.distortion, row.period, pi_star,
                                   cfg.channel, cfg.solver.tree_cap);
  row.margin = triplet.gain + epsilon - row.cost;
  return row;
}

void write_periodic_csv(const std::vector<PeriodicRow>& rows, const std::string& out_dir) {
  ensure_dir(out_dir);
  std::string csv = "epsilon,period,cost,margin\n";
  for (const auto& r : rows)
    csv += fmt_g12(r.epsilon) + "," + std::to_string(r.period) + "," + fmt_g12(r.cost) + "," +
           fmt_g12(r.margin) + "\n";
  write_text_file(out_dir + "/periodic.csv", csv);
}

std::vector<OracleCheckRow> cmd_oracle_check(const ExperimentConfig& cfg,
                                             const std::string& out_dir) {
  ensure_dir(out_dir);
  if (cfg.horizons.empty())
    fail(errc::config_error, "oracle-check needs at least one horizon");
  std::vector<OracleCheckRow> rows;
  for (int horizon : cfg.horizons) {
    OracleCheckRow row;
    row.horizon = horizon;
    row.dp_value = finite_horizon_dp(cfg.model, cfg.distortion, cfg.num_symbols, horizon,
                                     cfg.solver.tree_cap, cfg.solver.action_cap)
                       .value;
    row.oracle_value =
        exhaustive_min(cfg.model, cfg.distortion, cfg.num_symbols, horizon, cfg.oracle_cap).first;
    row.gap = std::abs(row.dp_value - row.oracle_value);
    rows.push_back(row);
    std::cout << (row.gap <= 1e-12 ? "PASS" : "FAIL") << " T=" << horizon
              << " dp=" << fmt_g12(row.dp_value) << " oracle=" << fmt_g12(row.oracle_value)
              << " gap=" << fmt_g12(row.gap) << "\n";
  }
  std::string csv = "T,dp_value,oracle_value,gap\n";
  for (const auto& r : rows)
    csv += std::to_string(r.horizon) + "," + fmt_g12(r.dp_value) + "," +
           fmt_g12(r.oracle_value) + "," + fmt_g12(r.gap) + "\n";
  write_text_file(out_dir + "/oracle_check.csv", csv);
  return rows;
}

SimulateOutputs cmd_simulate(const ExperimentConfig& cfg, const CanonicalTriplet& triplet,
                             const std::string& out_dir) {
  ensure_dir(out_dir);
  int horizon = cfg.horizons.empty() ? 1000 : cfg.horizons.back();

  CodecPolicy policy = stationary_policy(triplet);
  SessionTrace trace = run_session(cfg.model, cfg.channel, policy, cfg.distortion, horizon,
                                   derive_seed(cfg.seed, 0));
  std::string params = "channel=" + channel_summary(cfg) + " horizon=" + std::to_string(horizon) +
                       " seed=" + std::to_string(cfg.seed) +
                       " runs=" + std::to_string(cfg.num_runs);
  write_text_file(out_dir + "/trace.csv", trace_csv(trace, params));

  auto [mean, se] = simulate_policy(triplet, cfg.model, cfg.distortion, cfg.channel, horizon,
                                    cfg.num_runs, cfg.seed);
  std::string csv = "runs,horizon,mean_distortion,standard_error\n";
  csv += std::to_string(cfg.num_runs) + "," + std::to_string(horizon) + "," + fmt_g12(mean) +
         "," + fmt_g12(se) + "\n";
  write_text_file(out_dir + "/aggregate.csv", csv);
  return {mean, se};
}

CouplingReport cmd_couple(const ExperimentConfig& cfg, const std::string& out_dir) {
  ensure_dir(out_dir);
  CouplingReport coupling = make_coupling_report(cfg.model, cfg.distortion);
  save_coupling(coupling, out_dir + "/coupling.json");
  write_text_file(out_dir + "/expected_tau.csv", tau_matrix_csv(coupling.expected_tau));
  std::cout << "k1=" << fmt_g12(coupling.k1) << " k=" << fmt_g12(coupling.k)
            << " reference_state=" << coupling.reference_state + 1 << "\n";
  return coupling;
}

}  // namespace zdq
