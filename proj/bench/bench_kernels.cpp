// Timing harness for the parallel kernels against their serial references.
// Also double-checks that both paths produce bit-identical results.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <random>

#include "zdq/coupling.hpp"
#include "zdq/parallel.hpp"
#include "zdq/rng.hpp"
#include "zdq/solver.hpp"

using namespace zdq;

namespace {

double now_seconds() {
  return std::chrono::duration<double>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

template <typename F>
double time_best_of(int reps, F&& fn) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    double t0 = now_seconds();
    fn();
    best = std::min(best, now_seconds() - t0);
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  int sweeps = argc > 1 ? std::atoi(argv[1]) : 50;

  auto m = make_model(
      Matrix::from_rows({{0.8, 0.1, 0.1}, {0.1, 0.8, 0.1}, {0.1, 0.1, 0.8}}),
      Belief({1.0, 0.0, 0.0}));
  DistortionSpec ham = DistortionSpec::hamming(3);
  auto grid = BeliefGrid::make(100, 3);
  auto tables = build_tables(m, ham, 2, grid);
  std::printf("grid points: %d   actions: %d   threads: %d (openmp %s)\n", tables.num_points,
              tables.num_actions, max_threads(), openmp_enabled ? "on" : "off");

  std::mt19937_64 gen(1);
  std::vector<double> h(tables.num_points);
  for (double& v : h) v = uniform01(gen);

  std::vector<double> out_serial, out_parallel;
  std::vector<int> best_serial, best_parallel;
  double t_serial = time_best_of(3, [&] {
    for (int i = 0; i < sweeps; ++i) bellman_sweep_serial(tables, h, 0.97, out_serial, &best_serial);
  });
  double t_parallel = time_best_of(3, [&] {
    for (int i = 0; i < sweeps; ++i)
      bellman_sweep_parallel(tables, h, 0.97, out_parallel, &best_parallel);
  });
  bool sweep_match = out_serial == out_parallel && best_serial == best_parallel;
  std::printf("bellman sweep x%-4d   serial %8.3f ms   parallel %8.3f ms   speedup %5.2fx   "
              "identical: %s\n",
              sweeps, 1e3 * t_serial, 1e3 * t_parallel, t_serial / t_parallel,
              sweep_match ? "yes" : "NO");

  auto pairs = std::vector<std::pair<int, int>>{{0, 1}, {1, 2}, {2, 0}, {2, 2}};
  set_thread_count(1);
  TauSamples tau_1;
  double t_tau1 = time_best_of(3, [&] {
    tau_1 = monte_carlo_tau(m.transition, 0, pairs, 20000, 7);
  });
  set_thread_count(0);
  TauSamples tau_n;
  double t_taun = time_best_of(3, [&] {
    tau_n = monte_carlo_tau(m.transition, 0, pairs, 20000, 7);
  });
  // bitwise compare: unrequested pairs hold NaN, which never compares equal
  auto bits_equal = [](const std::vector<double>& a, const std::vector<double>& b) {
    return a.size() == b.size() &&
           std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
  };
  bool tau_match = bits_equal(tau_1.mean.a, tau_n.mean.a) && bits_equal(tau_1.se.a, tau_n.se.a);
  std::printf("monte carlo tau 2e4   1 thread %7.3f ms   N threads %7.3f ms   speedup %5.2fx   "
              "identical: %s\n",
              1e3 * t_tau1, 1e3 * t_taun, t_tau1 / t_taun, tau_match ? "yes" : "NO");

  return (sweep_match && tau_match) ? 0 : 1;
}
