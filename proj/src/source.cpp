#include "zdq/source.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <numeric>
#include <queue>

#include "zdq/rng.hpp"

namespace zdq {

namespace {

constexpr double kSumTol = 1e-12;
constexpr double kRowRejectTol = 1e-9;

// Adjacency of strictly positive transitions.
std::vector<std::vector<int>> positive_graph(const Matrix& p) {
  std::vector<std::vector<int>> adj(p.rows);
  for (int i = 0; i < p.rows; ++i)
    for (int j = 0; j < p.cols; ++j)
      if (p.at(i, j) > 0.0) adj[i].push_back(j);
  return adj;
}

std::vector<char> reachable_from(const std::vector<std::vector<int>>& adj, int start) {
  std::vector<char> seen(adj.size(), 0);
  std::queue<int> q;
  q.push(start);
  seen[start] = 1;
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (int v : adj[u])
      if (!seen[v]) {
        seen[v] = 1;
        q.push(v);
      }
  }
  return seen;
}

std::vector<std::vector<int>> transpose_graph(const std::vector<std::vector<int>>& adj) {
  std::vector<std::vector<int>> rev(adj.size());
  for (int u = 0; u < static_cast<int>(adj.size()); ++u)
    for (int v : adj[u]) rev[v].push_back(u);
  return rev;
}

}  // namespace

Belief point_mass(int state, int num_states) {
  Belief b(std::vector<double>(num_states, 0.0));
  b[state] = 1.0;
  return b;
}

void check_belief(const Belief& b) {
  if (b.size() == 0) fail(errc::dimension_mismatch, "empty belief");
  double sum = 0.0;
  for (double v : b.probs) {
    if (v < 0.0) fail(errc::negative_entry, "belief entry below zero");
    sum += v;
  }
  if (std::abs(sum - 1.0) > kSumTol)
    fail(errc::non_stochastic_matrix, "belief does not sum to one");
}

void check_row_stochastic(const Matrix& m, double tol, const char* what) {
  for (int r = 0; r < m.rows; ++r) {
    double sum = 0.0;
    for (int c = 0; c < m.cols; ++c) {
      double v = m.at(r, c);
      if (v < 0.0) fail(errc::negative_entry, std::string(what) + ": negative entry");
      if (v > 1.0 + kSumTol) fail(errc::non_stochastic_matrix, std::string(what) + ": entry above one");
      sum += v;
    }
    if (std::abs(sum - 1.0) > tol)
      fail(errc::non_stochastic_matrix,
           std::string(what) + ": row " + std::to_string(r + 1) + " sums to " + std::to_string(sum));
  }
}

MarkovModel make_model(Matrix transition, Belief initial) {
  MarkovModel m;
  m.num_states = transition.rows;
  m.transition = std::move(transition);
  m.initial = std::move(initial);
  validate(m);
  return m;
}

void validate(const MarkovModel& m) {
  if (m.num_states < 1 || m.transition.rows != m.num_states || m.transition.cols != m.num_states)
    fail(errc::dimension_mismatch, "transition matrix must be square of size num_states");
  check_row_stochastic(m.transition, kRowRejectTol, "transition");
  if (m.initial.size() != m.num_states)
    fail(errc::dimension_mismatch, "initial distribution has wrong length");
  check_belief(m.initial);
}

bool is_irreducible_matrix(const Matrix& p) {
  auto adj = positive_graph(p);
  auto fwd = reachable_from(adj, 0);
  auto bwd = reachable_from(transpose_graph(adj), 0);
  for (size_t i = 0; i < adj.size(); ++i)
    if (!fwd[i] || !bwd[i]) return false;
  return true;
}

bool is_aperiodic_matrix(const Matrix& p) {
  const int n = p.rows;
  auto adj = positive_graph(p);
  auto rev = transpose_graph(adj);

  std::vector<int> comp(n, -1);
  int num_comps = 0;
  for (int s = 0; s < n; ++s) {
    if (comp[s] >= 0) continue;
    auto fwd = reachable_from(adj, s);
    auto bwd = reachable_from(rev, s);
    for (int v = 0; v < n; ++v)
      if (comp[v] < 0 && fwd[v] && bwd[v]) comp[v] = num_comps;
    ++num_comps;
  }

  // Period of a component = gcd over internal edges (u,v) of depth(u)+1-depth(v).
  for (int c = 0; c < num_comps; ++c) {
    int root = -1;
    for (int v = 0; v < n && root < 0; ++v)
      if (comp[v] == c) root = v;
    std::vector<int> depth(n, -1);
    std::queue<int> q;
    q.push(root);
    depth[root] = 0;
    int g = 0;
    bool has_internal_edge = false;
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (int v : adj[u]) {
        if (comp[v] != c) continue;
        has_internal_edge = true;
        if (depth[v] < 0) {
          depth[v] = depth[u] + 1;
          q.push(v);
        } else {
          g = std::gcd(g, std::abs(depth[u] + 1 - depth[v]));
        }
      }
    }
    // A component with no internal edge is a transient singleton: its state
    // never returns, so the chain fails the aperiodicity definition.
    if (!has_internal_edge || g != 1) return false;
  }
  return true;
}

bool is_irreducible(const MarkovModel& m) { return is_irreducible_matrix(m.transition); }

bool is_aperiodic(const MarkovModel& m) { return is_aperiodic_matrix(m.transition); }

Belief stationary_distribution(const MarkovModel& m) {
  if (!is_irreducible(m)) fail(errc::not_irreducible, "stationary distribution needs an irreducible chain");
  const int n = m.num_states;

  // (P^T - I) pi = 0 with the last equation replaced by sum(pi) = 1.
  Eigen::MatrixXd A(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) A(r, c) = m.transition.at(c, r) - (r == c ? 1.0 : 0.0);
  for (int c = 0; c < n; ++c) A(n - 1, c) = 1.0;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  rhs(n - 1) = 1.0;

  Eigen::VectorXd pi = A.fullPivLu().solve(rhs);

  Belief out(std::vector<double>(n, 0.0));
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    double v = pi(i);
    if (v < 0.0) {
      if (v < -1e-12) fail(errc::solve_failed, "stationary solve produced a negative mass");
      v = 0.0;
    }
    out[i] = v;
    sum += v;
  }
  for (int i = 0; i < n; ++i) out[i] /= sum;

  double residual = 0.0;
  for (int j = 0; j < n; ++j) {
    double pj = 0.0;
    for (int i = 0; i < n; ++i) pj += out[i] * m.transition.at(i, j);
    residual += std::abs(pj - out[j]);
  }
  if (residual > 1e-10) fail(errc::solve_failed, "stationary fixed-point residual above 1e-10");
  return out;
}

std::vector<int> sample_path(const MarkovModel& m, int horizon, std::uint64_t seed) {
  if (horizon < 1) fail(errc::dimension_mismatch, "horizon must be at least 1");
  std::mt19937_64 gen(seed);
  std::vector<int> path(horizon);
  int x = sample_index(m.initial.probs.data(), m.num_states, uniform01(gen));
  path[0] = x;
  for (int t = 1; t < horizon; ++t) {
    x = sample_index(&m.transition.a[static_cast<size_t>(x) * m.num_states], m.num_states,
                     uniform01(gen));
    path[t] = x;
  }
  return path;
}

}  // namespace zdq
