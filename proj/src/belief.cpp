#include "zdq/belief.hpp"

#include <algorithm>
#include <cmath>

namespace zdq {

namespace {
constexpr double kZeroMass = 1e-15;
}

Channel Channel::noiseless(int m) {
  Channel ch;
  ch.t = Matrix::identity(m);
  return ch;
}

Channel Channel::bsc(double epsilon) {
  if (epsilon < 0.0 || epsilon > 1.0) fail(errc::config_error, "bsc crossover must be in [0,1]");
  Channel ch;
  ch.t = Matrix(2, 2);
  ch.t.at(0, 0) = 1.0 - epsilon;
  ch.t.at(0, 1) = epsilon;
  ch.t.at(1, 0) = epsilon;
  ch.t.at(1, 1) = 1.0 - epsilon;
  return ch;
}

Channel Channel::from_matrix(Matrix m) {
  check_row_stochastic(m, 1e-12, "channel");
  Channel ch;
  ch.t = std::move(m);
  return ch;
}

std::shared_ptr<const BeliefGrid> BeliefGrid::make(int resolution, int num_states) {
  if (resolution < 1 || num_states < 1)
    fail(errc::dimension_mismatch, "grid needs resolution >= 1 and num_states >= 1");
  auto grid = std::shared_ptr<BeliefGrid>(new BeliefGrid());
  grid->resolution_ = resolution;
  grid->num_states_ = num_states;

  std::vector<int> comp(num_states, 0);
  auto recurse = [&](auto&& self, int i, int left) -> void {
    if (i == num_states - 1) {
      comp[i] = left;
      grid->compositions_.push_back(comp);
      std::vector<double> coords(num_states);
      for (int k = 0; k < num_states; ++k)
        coords[k] = static_cast<double>(comp[k]) / static_cast<double>(resolution);
      grid->points_.push_back(Belief(std::move(coords)));
      return;
    }
    for (int v = 0; v <= left; ++v) {
      comp[i] = v;
      self(self, i + 1, left - v);
    }
  };
  recurse(recurse, 0, resolution);
  return grid;
}

int BeliefGrid::index_of(const std::vector<int>& composition) const {
  auto it = std::lower_bound(compositions_.begin(), compositions_.end(), composition);
  if (it == compositions_.end() || *it != composition)
    fail(errc::dimension_mismatch, "composition is not a grid point");
  return static_cast<int>(it - compositions_.begin());
}

int BeliefGrid::project(const Belief& pi) const {
  if (pi.size() != num_states_) fail(errc::dimension_mismatch, "projection dimension mismatch");
  const int d = num_states_;
  const int n = resolution_;

  // rho1 to a lattice point is (1/n) sum_k |G_k - c_k| over the scaled CDFs,
  // with 0 <= G_1 <= ... <= G_{d-1} <= n ranging over all monotone integer
  // vectors. The terms are independent, so rounding each c_k (half ties
  // downward, which keeps the lexicographically smallest point) is optimal.
  std::vector<int> comp(d);
  double cum = 0.0;
  int prev = 0;
  for (int k = 0; k < d - 1; ++k) {
    cum += pi[k];
    int g = static_cast<int>(std::ceil(cum * n - 0.5));
    g = std::clamp(g, prev, n);
    comp[k] = g - prev;
    prev = g;
  }
  comp[d - 1] = n - prev;
  return index_of(comp);
}

int project_to_grid(const Belief& pi, const BeliefGrid& grid) { return grid.project(pi); }

double symbol_probability(const Belief& pi, const Quantizer& q, int symbol) {
  double mass = 0.0;
  for (int x = 0; x < q.size(); ++x)
    if (q.labels[x] == symbol) mass += pi[x];
  return mass;
}

Belief filter_update(const Belief& pi, const Quantizer& q, int symbol, const Matrix& p) {
  const int n = p.rows;
  if (pi.size() != n || q.size() != n) fail(errc::dimension_mismatch, "filter dimension mismatch");

  int support = -1;
  int support_count = 0;
  double mass = 0.0;
  for (int x = 0; x < n; ++x) {
    if (q.labels[x] != symbol) continue;
    mass += pi[x];
    if (pi[x] > 0.0) {
      support = x;
      ++support_count;
    }
  }
  if (mass <= kZeroMass)
    fail(errc::zero_probability_symbol, "filter update on a zero-probability symbol");

  // A posterior concentrated on one source symbol propagates to exactly the
  // corresponding transition row; returning it verbatim keeps repeated visits
  // bit-identical, which the exact policy evaluator relies on for merging.
  Belief out(std::vector<double>(n, 0.0));
  if (support_count == 1) {
    for (int x2 = 0; x2 < n; ++x2) out[x2] = p.at(support, x2);
    return out;
  }
  for (int x2 = 0; x2 < n; ++x2) {
    double num = 0.0;
    for (int x = 0; x < n; ++x)
      if (q.labels[x] == symbol) num += p.at(x, x2) * pi[x];
    out[x2] = num / mass;
  }
  return out;
}

double noisy_symbol_probability(const Belief& pi, const Quantizer& q, int out_symbol,
                                const Channel& ch) {
  double mass = 0.0;
  for (int x = 0; x < q.size(); ++x) mass += pi[x] * ch.t.at(q.labels[x], out_symbol);
  return mass;
}

Belief noisy_filter_update(const Belief& pi, const Quantizer& q, int out_symbol, const Matrix& p,
                           const Channel& ch) {
  const int n = p.rows;
  if (pi.size() != n || q.size() != n) fail(errc::dimension_mismatch, "filter dimension mismatch");

  int support = -1;
  int support_count = 0;
  double mass = 0.0;
  for (int x = 0; x < n; ++x) {
    double w = pi[x] * ch.t.at(q.labels[x], out_symbol);
    mass += w;
    if (w > 0.0) {
      support = x;
      ++support_count;
    }
  }
  if (mass <= kZeroMass)
    fail(errc::zero_probability_symbol, "noisy filter update on a zero-probability symbol");

  Belief out(std::vector<double>(n, 0.0));
  if (support_count == 1) {
    for (int x2 = 0; x2 < n; ++x2) out[x2] = p.at(support, x2);
    return out;
  }
  for (int x2 = 0; x2 < n; ++x2) {
    double num = 0.0;
    for (int x = 0; x < n; ++x) num += pi[x] * ch.t.at(q.labels[x], out_symbol) * p.at(x, x2);
    out[x2] = num / mass;
  }
  return out;
}

double noisy_stage_cost(const Belief& pi, const Quantizer& q, const DistortionSpec& d,
                        const Channel& ch) {
  const int n = q.size();
  if (pi.size() != n || d.source_size() != n || ch.input_size() != q.num_symbols)
    fail(errc::dimension_mismatch, "noisy_stage_cost: incompatible dimensions");
  double total = 0.0;
  for (int out = 0; out < ch.output_size(); ++out) {
    double best = -1.0;
    for (int xhat = 0; xhat < d.reproduction_size(); ++xhat) {
      double s = 0.0;
      for (int x = 0; x < n; ++x) s += pi[x] * ch.t.at(q.labels[x], out) * d.d.at(x, xhat);
      if (best < 0.0 || s < best) best = s;
    }
    total += best;
  }
  return total;
}

int noisy_optimal_reproduction(const Belief& pi, const Quantizer& q, const DistortionSpec& d,
                               int out_symbol, const Channel& ch) {
  const int n = q.size();
  int best = 0;
  double best_cost = -1.0;
  for (int xhat = 0; xhat < d.reproduction_size(); ++xhat) {
    double s = 0.0;
    for (int x = 0; x < n; ++x) s += pi[x] * ch.t.at(q.labels[x], out_symbol) * d.d.at(x, xhat);
    if (best_cost < 0.0 || s < best_cost) {
      best_cost = s;
      best = xhat;
    }
  }
  return best;
}

double wasserstein1(const Belief& mu, const Belief& zeta) {
  if (mu.size() != zeta.size()) fail(errc::dimension_mismatch, "wasserstein1 dimension mismatch");
  double dist = 0.0;
  double diff = 0.0;
  for (int k = 0; k < mu.size() - 1; ++k) {
    diff += mu[k] - zeta[k];
    dist += std::abs(diff);
  }
  return dist;
}

}  // namespace zdq
