#include "zdq/coupling.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>

#include "zdq/parallel.hpp"
#include "zdq/rng.hpp"

namespace zdq {

Matrix expected_coupling_times(const Matrix& p, int reference_state) {
  const int n = p.rows;
  if (reference_state < 0 || reference_state >= n)
    fail(errc::dimension_mismatch, "reference state out of range");
  if (!is_irreducible_matrix(p) || !is_aperiodic_matrix(p))
    fail(errc::not_irreducible_aperiodic,
         "coupling times need an irreducible aperiodic chain");

  // Unknowns: k(x,y) for all pairs except (b,b), ordered lexicographically.
  // k(s) = 1 + sum_{s'} P(x'|x) P(y'|y) k(s'), k(b,b) = 0.
  const int target = reference_state * n + reference_state;
  const int m = n * n - 1;
  auto pack = [&](int s) { return s < target ? s : s - 1; };

  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(m, m);
  Eigen::VectorXd rhs = Eigen::VectorXd::Ones(m);
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      int s = x * n + y;
      if (s == target) continue;
      A(pack(s), pack(s)) += 1.0;
      for (int x2 = 0; x2 < n; ++x2) {
        for (int y2 = 0; y2 < n; ++y2) {
          int s2 = x2 * n + y2;
          if (s2 == target) continue;
          A(pack(s), pack(s2)) -= p.at(x, x2) * p.at(y, y2);
        }
      }
    }
  }
  Eigen::VectorXd k = A.partialPivLu().solve(rhs);

  double residual = (A * k - rhs).cwiseAbs().maxCoeff();
  if (!(residual <= 1e-9))
    fail(errc::solve_failed, "coupling-time solve residual above 1e-9");

  Matrix out(n, n);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) {
      int s = x * n + y;
      out.at(x, y) = (s == target) ? 0.0 : k(pack(s));
      if (out.at(x, y) < 0.0)
        fail(errc::solve_failed, "negative expected coupling time");
    }
  return out;
}

std::pair<int, double> choose_reference_state(const Matrix& p) {
  int best_b = 0;
  double best_k1 = std::numeric_limits<double>::infinity();
  for (int b = 0; b < p.rows; ++b) {
    Matrix tau = expected_coupling_times(p, b);
    double k1 = 0.0;
    for (double v : tau.a) k1 = std::max(k1, v);
    if (k1 < best_k1) {
      best_k1 = k1;
      best_b = b;
    }
  }
  return {best_b, best_k1};
}

CouplingReport make_coupling_report(const MarkovModel& m, const DistortionSpec& d) {
  CouplingReport r;
  r.num_states = m.num_states;
  auto [b, k1] = choose_reference_state(m.transition);
  r.reference_state = b;
  r.k1 = k1;
  r.expected_tau = expected_coupling_times(m.transition, b);
  r.d_inf = d.d_inf;
  r.k = 2.0 * k1 * d.d_inf * m.num_states;
  return r;
}

TauSamples monte_carlo_tau(const Matrix& p, int reference_state,
                           const std::vector<std::pair<int, int>>& pairs, int runs,
                           std::uint64_t seed) {
  const int n = p.rows;
  constexpr std::int64_t kStepCap = 10'000'000;
  TauSamples out;
  out.mean = Matrix(n, n);
  out.se = Matrix(n, n);
  for (double& v : out.mean.a) v = std::numeric_limits<double>::quiet_NaN();
  for (double& v : out.se.a) v = std::numeric_limits<double>::quiet_NaN();

  for (size_t pi = 0; pi < pairs.size(); ++pi) {
    auto [x0, y0] = pairs[pi];
    std::vector<double> tau(runs);
    bool capped = false;
#pragma omp parallel for schedule(static)
    for (int r = 0; r < runs; ++r) {
      std::mt19937_64 gen(derive_seed(seed, pi * static_cast<std::uint64_t>(runs) + r));
      int x = x0, y = y0;
      std::int64_t t = 0;
      while (!(x == reference_state && y == reference_state)) {
        x = sample_index(&p.a[static_cast<size_t>(x) * n], n, uniform01(gen));
        y = sample_index(&p.a[static_cast<size_t>(y) * n], n, uniform01(gen));
        if (++t > kStepCap) {
          capped = true;
          break;
        }
      }
      tau[r] = static_cast<double>(t);
    }
    if (capped) fail(errc::no_convergence, "coupling simulation exceeded the step cap");
    double mean = 0.0;
    for (double v : tau) mean += v;
    mean /= runs;
    double var = 0.0;
    for (double v : tau) var += (v - mean) * (v - mean);
    var = runs > 1 ? var / (runs - 1) : 0.0;
    out.mean.at(x0, y0) = mean;
    out.se.at(x0, y0) = std::sqrt(var / runs);
  }
  return out;
}

double verify_lipschitz(const MarkovModel& m, const DistortionSpec& d, int num_symbols,
                        std::shared_ptr<const BeliefGrid> grid, double beta,
                        const std::vector<std::pair<int, int>>& grid_pairs,
                        const SolverOptions& opts) {
  auto [k1_b, k1] = choose_reference_state(m.transition);
  (void)k1_b;
  auto tables = build_tables(m, d, num_symbols, grid, {}, opts.action_cap);
  auto [j, policy] = discounted_value_iteration(tables, beta, opts.tol, opts.max_iters);
  (void)policy;

  double worst = -std::numeric_limits<double>::infinity();
  for (auto [zi, zj] : grid_pairs) {
    double gap = std::abs(j.values[zi] - j.values[zj]);
    double bound = k1 * d.d_inf * wasserstein1(grid->point(zi), grid->point(zj));
    worst = std::max(worst, gap - bound);
  }
  return worst;
}

}  // namespace zdq
