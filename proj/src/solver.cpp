#include "zdq/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <iostream>
#include <map>

#include "zdq/parallel.hpp"

namespace zdq {

namespace {

constexpr double kZeroMass = 1e-15;

double arc_probability(const Belief& pi, const Quantizer& a, int symbol,
                       const std::optional<Channel>& channel) {
  return channel ? noisy_symbol_probability(pi, a, symbol, *channel)
                 : symbol_probability(pi, a, symbol);
}

Belief arc_child(const Belief& pi, const Quantizer& a, int symbol, const Matrix& p,
                 const std::optional<Channel>& channel) {
  return channel ? noisy_filter_update(pi, a, symbol, p, *channel)
                 : filter_update(pi, a, symbol, p);
}

double arc_cost(const Belief& pi, const Quantizer& a, const DistortionSpec& d,
                const std::optional<Channel>& channel) {
  return channel ? noisy_stage_cost(pi, a, d, *channel) : stage_cost(pi, a, d);
}

int point_backup(const TransitionTables& t, const std::vector<double>& h, double beta, int z,
                 double* value_out) {
  int best_a = 0;
  double best_v = 0.0;
  const int na = t.num_actions;
  for (int a = 0; a < na; ++a) {
    double v = t.cost[static_cast<size_t>(z) * na + a];
    double acc = 0.0;
    for (int k = t.arcs_begin(z, a); k < t.arcs_end(z, a); ++k)
      acc += t.prob[k] * h[t.child[k]];
    v += beta * acc;
    if (a == 0 || v < best_v) {
      best_v = v;
      best_a = a;
    }
  }
  *value_out = best_v;
  return best_a;
}

std::vector<unsigned char> encode_key(const Belief& b) {
  std::vector<unsigned char> key(b.size() * sizeof(double));
  std::memcpy(key.data(), b.probs.data(), key.size());
  return key;
}

}  // namespace

TransitionTables build_tables(const MarkovModel& m, const DistortionSpec& d, int num_symbols,
                              std::shared_ptr<const BeliefGrid> grid,
                              const std::optional<Channel>& channel, std::int64_t action_cap) {
  if (channel && channel->input_size() != num_symbols)
    fail(errc::dimension_mismatch, "channel input alphabet must match M");
  TransitionTables t;
  t.grid = std::move(grid);
  t.mode = channel ? DedupMode::labeled : DedupMode::partition;
  t.actions = enumerate_quantizers(m.num_states, num_symbols, t.mode, action_cap);
  t.num_points = t.grid->size();
  t.num_actions = static_cast<int>(t.actions.size());
  const int num_obs = channel ? channel->output_size() : num_symbols;

  t.cost.resize(static_cast<size_t>(t.num_points) * t.num_actions);
  t.offset.assign(static_cast<size_t>(t.num_points) * t.num_actions + 1, 0);
  t.child.reserve(static_cast<size_t>(t.num_points) * t.num_actions * num_obs);
  t.prob.reserve(t.child.capacity());

  for (int z = 0; z < t.num_points; ++z) {
    const Belief& pi = t.grid->point(z);
    for (int a = 0; a < t.num_actions; ++a) {
      const Quantizer& q = t.actions[a];
      t.cost[static_cast<size_t>(z) * t.num_actions + a] = arc_cost(pi, q, d, channel);
      for (int sym = 0; sym < num_obs; ++sym) {
        double p = arc_probability(pi, q, sym, channel);
        if (p <= kZeroMass) continue;
        Belief next = arc_child(pi, q, sym, m.transition, channel);
        t.child.push_back(t.grid->project(next));
        t.prob.push_back(p);
      }
      t.offset[static_cast<size_t>(z) * t.num_actions + a + 1] =
          static_cast<int>(t.child.size());
    }
  }
  return t;
}

void bellman_sweep_serial(const TransitionTables& t, const std::vector<double>& h, double beta,
                          std::vector<double>& out, std::vector<int>* best_action) {
  out.resize(t.num_points);
  if (best_action) best_action->resize(t.num_points);
  for (int z = 0; z < t.num_points; ++z) {
    double v;
    int a = point_backup(t, h, beta, z, &v);
    out[z] = v;
    if (best_action) (*best_action)[z] = a;
  }
}

void bellman_sweep_parallel(const TransitionTables& t, const std::vector<double>& h, double beta,
                            std::vector<double>& out, std::vector<int>* best_action) {
  out.resize(t.num_points);
  if (best_action) best_action->resize(t.num_points);
#pragma omp parallel for schedule(static)
  for (int z = 0; z < t.num_points; ++z) {
    double v;
    int a = point_backup(t, h, beta, z, &v);
    out[z] = v;
    if (best_action) (*best_action)[z] = a;
  }
}

std::pair<double, int> bellman_backup(const Belief& pi, const ValueFunction& h, double beta,
                                      const MarkovModel& m, const DistortionSpec& d,
                                      const std::vector<Quantizer>& actions,
                                      const std::optional<Channel>& channel) {
  const int num_obs = channel ? channel->output_size()
                              : (actions.empty() ? 0 : actions[0].num_symbols);
  double best_v = 0.0;
  int best_a = 0;
  for (int a = 0; a < static_cast<int>(actions.size()); ++a) {
    double v = arc_cost(pi, actions[a], d, channel);
    double acc = 0.0;
    for (int sym = 0; sym < num_obs; ++sym) {
      double p = arc_probability(pi, actions[a], sym, channel);
      if (p <= kZeroMass) continue;
      Belief next = arc_child(pi, actions[a], sym, m.transition, channel);
      acc += p * h.values[h.grid->project(next)];
    }
    v += beta * acc;
    if (a == 0 || v < best_v) {
      best_v = v;
      best_a = a;
    }
  }
  return {best_v, best_a};
}

FiniteHorizonPlan finite_horizon_dp(const MarkovModel& m, const DistortionSpec& d, int num_symbols,
                                    int horizon, std::int64_t tree_cap, std::int64_t action_cap) {
  if (horizon < 1) fail(errc::dimension_mismatch, "horizon must be at least 1");
  auto actions = enumerate_quantizers(m.num_states, num_symbols, DedupMode::partition, action_cap);
  const int na = static_cast<int>(actions.size());

  FiniteHorizonPlan plan;
  plan.horizon = horizon;
  plan.stages.resize(horizon + 1);
  plan.stages[0].push_back({m.initial, 0.0, -1});

  // arcs[t][node * na + a] lists (child index in stage t+1, probability).
  std::vector<std::vector<std::vector<std::pair<int, double>>>> arcs(horizon);
  std::int64_t total_nodes = 1;

  for (int t = 0; t < horizon; ++t) {
    auto& cur = plan.stages[t];
    auto& nxt = plan.stages[t + 1];
    arcs[t].resize(cur.size() * na);
    for (int i = 0; i < static_cast<int>(cur.size()); ++i) {
      for (int a = 0; a < na; ++a) {
        for (int sym = 0; sym < num_symbols; ++sym) {
          double p = symbol_probability(cur[i].pi, actions[a], sym);
          if (p <= kZeroMass) continue;
          Belief next = filter_update(cur[i].pi, actions[a], sym, m.transition);
          arcs[t][static_cast<size_t>(i) * na + a].push_back(
              {static_cast<int>(nxt.size()), p});
          nxt.push_back({std::move(next), 0.0, -1});
          if (++total_nodes > tree_cap)
            fail(errc::tree_too_large, "finite-horizon belief tree exceeds cap");
        }
      }
    }
  }

  for (int t = horizon - 1; t >= 0; --t) {
    auto& cur = plan.stages[t];
    const auto& nxt = plan.stages[t + 1];
    for (int i = 0; i < static_cast<int>(cur.size()); ++i) {
      double best_v = 0.0;
      int best_a = 0;
      for (int a = 0; a < na; ++a) {
        double v = stage_cost(cur[i].pi, actions[a], d);
        for (auto [ci, p] : arcs[t][static_cast<size_t>(i) * na + a])
          v += p * nxt[ci].remaining;
        if (a == 0 || v < best_v) {
          best_v = v;
          best_a = a;
        }
      }
      cur[i].remaining = best_v;
      cur[i].action = best_a;
    }
  }
  plan.value = plan.stages[0][0].remaining / horizon;
  return plan;
}

std::pair<ValueFunction, std::vector<int>> discounted_value_iteration(
    const TransitionTables& tables, double beta, double tol, int max_iters) {
  if (!(beta > 0.0 && beta < 1.0))
    fail(errc::invalid_discount, "discount factor must lie in (0,1)");
  if (!(tol > 0.0)) fail(errc::config_error, "tolerance must be positive");

  const double stop = tol * (1.0 - beta) / (2.0 * beta);
  std::vector<double> j(tables.num_points, 0.0);
  std::vector<double> tj;
  std::vector<int> best(tables.num_points, 0);
  for (int it = 0; it < max_iters; ++it) {
    bellman_sweep_parallel(tables, j, beta, tj, &best);
    double diff = 0.0;
    for (int z = 0; z < tables.num_points; ++z)
      diff = std::max(diff, std::abs(tj[z] - j[z]));
    j.swap(tj);
    if (diff <= stop) {
      ValueFunction vf{tables.grid, std::move(j)};
      return {std::move(vf), std::move(best)};
    }
  }
  fail(errc::no_convergence,
       "value iteration did not converge in " + std::to_string(max_iters) + " sweeps");
}

std::pair<ValueFunction, std::vector<int>> discounted_value_iteration(
    const MarkovModel& m, const DistortionSpec& d, int num_symbols, double beta,
    std::shared_ptr<const BeliefGrid> grid, double tol, const std::optional<Channel>& channel) {
  auto tables = build_tables(m, d, num_symbols, std::move(grid), channel);
  return discounted_value_iteration(tables, beta, tol);
}

CanonicalTriplet solve_average_cost(const MarkovModel& m, const DistortionSpec& d, int num_symbols,
                                    std::shared_ptr<const BeliefGrid> grid,
                                    AverageCostMethod method, const SolverOptions& opts,
                                    const std::optional<Channel>& channel) {
  Belief reference = m.initial;
  if (is_irreducible(m)) {
    if (!is_aperiodic(m))
      std::cerr << "warning: source chain is periodic; average-cost guarantees void\n";
    reference = stationary_distribution(m);
  } else {
    std::cerr << "warning: source chain is reducible; average-cost guarantees void and the "
                 "gain may depend on the initial distribution\n";
  }

  auto tables = build_tables(m, d, num_symbols, grid, channel, opts.action_cap);
  const int ref = tables.grid->project(reference);
  const int np = tables.num_points;

  CanonicalTriplet out;
  out.actions = tables.actions;
  out.mode = tables.mode;
  out.reference_index = ref;
  out.h.grid = tables.grid;

  if (method == AverageCostMethod::rvi) {
    std::vector<double> h(np, 0.0);
    std::vector<double> th;
    std::vector<int> best(np, 0);
    const double w = opts.damping;
    for (int it = 0; it < opts.max_iters; ++it) {
      bellman_sweep_parallel(tables, h, 1.0, th, &best);
      double lo = th[0] - h[0], hi = lo;
      for (int z = 1; z < np; ++z) {
        double delta = th[z] - h[z];
        lo = std::min(lo, delta);
        hi = std::max(hi, delta);
      }
      if (hi - lo <= opts.tol) {
        out.gain = 0.5 * (hi + lo);
        double href = h[ref];
        out.h.values.resize(np);
        for (int z = 0; z < np; ++z) out.h.values[z] = h[z] - href;
        out.policy = best;
        return out;
      }
      for (int z = 0; z < np; ++z) h[z] = w * th[z] + (1.0 - w) * h[z];
      double href = h[ref];
      for (int z = 0; z < np; ++z) h[z] -= href;
    }
    fail(errc::no_convergence, "relative value iteration did not reach the span tolerance in " +
                                   std::to_string(opts.max_iters) + " sweeps");
  }

  // Vanishing discount: solve the discounted problem along beta_k = 1 - 2^-k
  // and read the gain off (1-beta) J^beta at the reference point.
  ValueFunction j;
  std::vector<int> best;
  double beta = 0.0;
  for (int k = 1; k <= opts.vd_max_k; ++k) {
    beta = 1.0 - std::ldexp(1.0, -k);
    std::tie(j, best) = discounted_value_iteration(tables, beta, opts.tol, opts.max_iters);
  }
  out.gain = (1.0 - beta) * j.values[ref];
  out.h.values.resize(np);
  for (int z = 0; z < np; ++z) out.h.values[z] = j.values[z] - j.values[ref];
  out.policy = std::move(best);
  return out;
}

double acoe_residual(const CanonicalTriplet& triplet, const MarkovModel& m,
                     const DistortionSpec& d, int num_symbols,
                     const std::optional<Channel>& channel) {
  auto tables = build_tables(m, d, num_symbols, triplet.h.grid, channel);
  std::vector<double> th;
  bellman_sweep_parallel(tables, triplet.h.values, 1.0, th, nullptr);
  double res = 0.0;
  for (int z = 0; z < tables.num_points; ++z)
    res = std::max(res, std::abs(triplet.gain + triplet.h.values[z] - th[z]));
  return res;
}

double evaluate_policy_exact(const CanonicalTriplet& policy, const MarkovModel& m,
                             const DistortionSpec& d, int horizon, const Belief& start,
                             const std::optional<Channel>& channel, std::int64_t tree_cap) {
  if (horizon < 1) fail(errc::dimension_mismatch, "horizon must be at least 1");
  const int num_obs =
      channel ? channel->output_size() : (policy.actions.empty() ? 0 : policy.actions[0].num_symbols);

  std::map<std::vector<unsigned char>, std::pair<Belief, double>> layer;
  layer.emplace(encode_key(start), std::make_pair(start, 1.0));
  double total = 0.0;
  for (int t = 0; t < horizon; ++t) {
    std::map<std::vector<unsigned char>, std::pair<Belief, double>> next_layer;
    for (const auto& [key, node] : layer) {
      const auto& [pi, weight] = node;
      const Quantizer& q = policy.actions[policy.policy[policy.h.grid->project(pi)]];
      total += weight * arc_cost(pi, q, d, channel);
      if (t + 1 == horizon) continue;
      for (int sym = 0; sym < num_obs; ++sym) {
        double p = arc_probability(pi, q, sym, channel);
        if (p <= kZeroMass) continue;
        Belief child = arc_child(pi, q, sym, m.transition, channel);
        auto ck = encode_key(child);
        auto it = next_layer.find(ck);
        if (it == next_layer.end())
          next_layer.emplace(std::move(ck), std::make_pair(std::move(child), weight * p));
        else
          it->second.second += weight * p;
      }
      if (static_cast<std::int64_t>(next_layer.size()) > tree_cap)
        fail(errc::tree_too_large, "policy evaluation tree exceeds cap");
    }
    layer.swap(next_layer);
  }
  return total / horizon;
}

}  // namespace zdq
