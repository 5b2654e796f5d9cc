#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "zdq/belief.hpp"

namespace zdq {

struct ValueFunction {
  std::shared_ptr<const BeliefGrid> grid;
  std::vector<double> values;  // one per grid point
};

// Solution of the average cost optimality equation on the grid:
// gain + h(z) = min_Q [ c(z,Q) + sum_q p(q|z,Q) h(next(z,Q,q)) ],
// with h pinned to zero at the grid point nearest the invariant belief.
struct CanonicalTriplet {
  double gain = 0.0;
  ValueFunction h;
  std::vector<int> policy;  // argmin action index per grid point
  std::vector<Quantizer> actions;
  DedupMode mode = DedupMode::partition;
  int reference_index = 0;
};

// The finite MDP induced on the grid: per (point, action) stage costs and the
// projected filter transitions. Zero-probability symbols are dropped rather
// than renormalized; they carry no weight in any expectation.
struct TransitionTables {
  std::shared_ptr<const BeliefGrid> grid;
  std::vector<Quantizer> actions;
  DedupMode mode = DedupMode::partition;
  int num_points = 0;
  int num_actions = 0;
  std::vector<double> cost;    // num_points * num_actions
  std::vector<int> offset;     // num_points * num_actions + 1
  std::vector<int> child;      // arc target grid index
  std::vector<double> prob;    // arc probability

  int arcs_begin(int z, int a) const { return offset[static_cast<size_t>(z) * num_actions + a]; }
  int arcs_end(int z, int a) const { return offset[static_cast<size_t>(z) * num_actions + a + 1]; }
};

struct SolverOptions {
  double tol = 1e-9;
  int max_iters = 200000;
  double damping = 0.5;     // relative value iteration mixing weight on T h
  int vd_max_k = 10;        // vanishing-discount ladder: beta_k = 1 - 2^-k
  std::int64_t action_cap = 1'000'000;
  std::int64_t tree_cap = 2'000'000;

  bool operator==(const SolverOptions&) const = default;
};

enum class AverageCostMethod { rvi, vanishing_discount };

// Noiseless solvers act on partition-canonical quantizers; a channel switches
// to fully labeled quantizers because T(q'|q) distinguishes output labels.
TransitionTables build_tables(const MarkovModel& m, const DistortionSpec& d, int num_symbols,
                              std::shared_ptr<const BeliefGrid> grid,
                              const std::optional<Channel>& channel = {},
                              std::int64_t action_cap = 1'000'000);

// One synchronous sweep of the Bellman operator over every grid point:
// out[z] = min_a [ cost(z,a) + beta * sum arcs prob * h[child] ].
// The two variants are bit-identical; the OpenMP one writes disjoint slots so
// results do not depend on the worker count.
void bellman_sweep_serial(const TransitionTables& t, const std::vector<double>& h, double beta,
                          std::vector<double>& out, std::vector<int>* best_action);
void bellman_sweep_parallel(const TransitionTables& t, const std::vector<double>& h, double beta,
                            std::vector<double>& out, std::vector<int>* best_action);

// Single-point backup for an arbitrary belief; expectations evaluate child
// beliefs through the filter and grid projection. Ties go to the smallest
// action index.
std::pair<double, int> bellman_backup(const Belief& pi, const ValueFunction& h, double beta,
                                      const MarkovModel& m, const DistortionSpec& d,
                                      const std::vector<Quantizer>& actions,
                                      const std::optional<Channel>& channel = {});

// Exact finite-horizon plan on the beliefs reachable from the initial
// distribution; no grid is involved.
struct FiniteHorizonPlan {
  struct Node {
    Belief pi;
    double remaining = 0.0;  // unnormalized optimal cost-to-go
    int action = -1;
  };
  int horizon = 0;
  double value = 0.0;  // optimal average cost (1/T) E[sum d]
  std::vector<std::vector<Node>> stages;  // stages[T] holds the zero terminal values
};

FiniteHorizonPlan finite_horizon_dp(const MarkovModel& m, const DistortionSpec& d, int num_symbols,
                                    int horizon, std::int64_t tree_cap = 2'000'000,
                                    std::int64_t action_cap = 1'000'000);

// Value iteration from J == 0 until the sup-norm update is at most
// tol*(1-beta)/(2*beta), which pins the Bellman residual below tol.
std::pair<ValueFunction, std::vector<int>> discounted_value_iteration(
    const TransitionTables& tables, double beta, double tol, int max_iters = 200000);

std::pair<ValueFunction, std::vector<int>> discounted_value_iteration(
    const MarkovModel& m, const DistortionSpec& d, int num_symbols, double beta,
    std::shared_ptr<const BeliefGrid> grid, double tol,
    const std::optional<Channel>& channel = {});

CanonicalTriplet solve_average_cost(const MarkovModel& m, const DistortionSpec& d, int num_symbols,
                                    std::shared_ptr<const BeliefGrid> grid,
                                    AverageCostMethod method, const SolverOptions& opts = {},
                                    const std::optional<Channel>& channel = {});

// max_z | gain + h(z) - min_Q [ c(z,Q) + sum_q p(q) h(next) ] |.
double acoe_residual(const CanonicalTriplet& triplet, const MarkovModel& m,
                     const DistortionSpec& d, int num_symbols,
                     const std::optional<Channel>& channel = {});

// Expected average distortion over `horizon` steps of the stationary policy
// from `start`, by exact forward expansion of the reachable belief tree with
// symbol probabilities as branch weights. Beliefs that coincide bitwise are
// merged, so the expansion stays small under injective-cell policies.
double evaluate_policy_exact(const CanonicalTriplet& policy, const MarkovModel& m,
                             const DistortionSpec& d, int horizon, const Belief& start,
                             const std::optional<Channel>& channel = {},
                             std::int64_t tree_cap = 2'000'000);

// Monte Carlo counterpart of evaluate_policy_exact through the online codec;
// returns (mean, standard error) over independent seeded sessions.
std::pair<double, double> simulate_policy(const CanonicalTriplet& policy, const MarkovModel& m,
                                          const DistortionSpec& d,
                                          const std::optional<Channel>& channel, int horizon,
                                          int num_runs, std::uint64_t seed);

}  // namespace zdq
