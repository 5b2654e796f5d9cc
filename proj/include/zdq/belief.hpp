#pragma once

#include <memory>
#include <vector>

#include "zdq/quantizer.hpp"

namespace zdq {

// Discrete memoryless channel T(q'|q) with feedback assumed at the system
// level; the matrix itself is just the symbol transition law.
struct Channel {
  Matrix t;  // input_size x output_size, row-stochastic

  int input_size() const { return t.rows; }
  int output_size() const { return t.cols; }

  static Channel noiseless(int m);
  static Channel bsc(double epsilon);
  static Channel from_matrix(Matrix m);

  bool operator==(const Channel&) const = default;
};

// Type lattice on the simplex: every belief with entries in {0, 1/n, ..., 1}
// summing to one, in lexicographic order. Immutable and shared read-only.
class BeliefGrid {
 public:
  static std::shared_ptr<const BeliefGrid> make(int resolution, int num_states);

  int resolution() const { return resolution_; }
  int num_states() const { return num_states_; }
  int size() const { return static_cast<int>(points_.size()); }
  const Belief& point(int i) const { return points_[i]; }

  // Index of a lattice point minimizing the rho1 distance to pi; ties resolve
  // to the lexicographically smallest point. The chosen point is within
  // |X|/(2n) of pi.
  int project(const Belief& pi) const;

  // Exact index lookup for a lattice composition (counts summing to n).
  int index_of(const std::vector<int>& composition) const;

 private:
  BeliefGrid() = default;
  int resolution_ = 0;
  int num_states_ = 0;
  std::vector<Belief> points_;
  std::vector<std::vector<int>> compositions_;
};

int project_to_grid(const Belief& pi, const BeliefGrid& grid);

// pi(Q^{-1}(symbol)).
double symbol_probability(const Belief& pi, const Quantizer& q, int symbol);

// One step of the belief recursion after sending `symbol` through a noiseless
// channel:  pi'(x') = (1/pi(cell)) sum_{x in cell} P(x'|x) pi(x).
// Throws zero_probability_symbol when the cell mass is at most 1e-15.
Belief filter_update(const Belief& pi, const Quantizer& q, int symbol, const Matrix& p);

// Probability of observing channel output `out_symbol`:
// sum_x pi(x) T(out|Q(x)).
double noisy_symbol_probability(const Belief& pi, const Quantizer& q, int out_symbol,
                                const Channel& ch);

// Belief recursion across a noisy channel with feedback:
// pi'(x') proportional to sum_x pi(x) T(out|Q(x)) P(x'|x).
Belief noisy_filter_update(const Belief& pi, const Quantizer& q, int out_symbol, const Matrix& p,
                           const Channel& ch);

// Expected distortion of (pi, Q) across the channel with the best
// reproduction chosen per received symbol:
// sum_{q'} min_xhat sum_x pi(x) T(q'|Q(x)) d(x,xhat).
// Reduces to stage_cost for the identity channel.
double noisy_stage_cost(const Belief& pi, const Quantizer& q, const DistortionSpec& d,
                        const Channel& ch);

// Argmin reproduction given the received symbol, using the within-step Bayes
// posterior over the current source symbol.
int noisy_optimal_reproduction(const Belief& pi, const Quantizer& q, const DistortionSpec& d,
                               int out_symbol, const Channel& ch);

// Exact L1 Wasserstein distance between beliefs on {1..|X|} embedded in the
// real line: sum over k of |F_mu(k) - F_zeta(k)|.
double wasserstein1(const Belief& mu, const Belief& zeta);

}  // namespace zdq
