#pragma once

#include <cstdint>
#include <vector>

#include "zdq/matrix.hpp"

namespace zdq {

// Probability vector over the source alphabet {1..|X|}; doubles as the state
// of the belief MDP. States are identified with the integers 1..|X| viewed as
// points on the real line (0-based in code, 1-based in file formats).
struct Belief {
  std::vector<double> probs;

  Belief() = default;
  explicit Belief(std::vector<double> p) : probs(std::move(p)) {}

  int size() const { return static_cast<int>(probs.size()); }
  double& operator[](int i) { return probs[i]; }
  double operator[](int i) const { return probs[i]; }
  bool operator==(const Belief&) const = default;
};

Belief point_mass(int state, int num_states);

// Entries nonnegative, sum within 1e-12 of one.
void check_belief(const Belief& b);

// Finite-state Markov source: transition matrix P plus initial distribution.
struct MarkovModel {
  int num_states = 0;
  Matrix transition;  // num_states x num_states, row-stochastic
  Belief initial;

  bool operator==(const MarkovModel&) const = default;
};

MarkovModel make_model(Matrix transition, Belief initial);

// Row sums within 1e-12 of one (rejects beyond 1e-9), entries in [0,1],
// initial distribution a valid belief.
void validate(const MarkovModel& m);

// True iff the directed graph of positive transitions is strongly connected.
bool is_irreducible(const MarkovModel& m);

// True iff every state's return-time gcd is 1 on the positive-transition
// graph. Computed per strongly connected component via breadth-first
// layering; states that cannot return to themselves are periodic by
// convention.
bool is_aperiodic(const MarkovModel& m);

// Unique invariant distribution of an irreducible chain, via a direct linear
// solve of pi P = pi with the normalization row. Fixed-point residual is
// checked to 1e-10.
Belief stationary_distribution(const MarkovModel& m);

// Length-`horizon` state path, X0 ~ initial, X_{t+1} ~ P(.|X_t).
// Deterministic given the seed.
std::vector<int> sample_path(const MarkovModel& m, int horizon, std::uint64_t seed);

// Graph-level helpers shared with the coupling analysis.
bool is_irreducible_matrix(const Matrix& p);
bool is_aperiodic_matrix(const Matrix& p);

}  // namespace zdq
