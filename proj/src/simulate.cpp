#include <cmath>

#include "zdq/codec.hpp"
#include "zdq/parallel.hpp"
#include "zdq/rng.hpp"
#include "zdq/solver.hpp"

namespace zdq {

std::pair<double, double> simulate_policy(const CanonicalTriplet& policy, const MarkovModel& m,
                                          const DistortionSpec& d,
                                          const std::optional<Channel>& channel, int horizon,
                                          int num_runs, std::uint64_t seed) {
  if (num_runs < 1) fail(errc::config_error, "num_runs must be at least 1");
  CodecPolicy cp = stationary_policy(policy);
  std::vector<double> per_run(num_runs);
#pragma omp parallel for schedule(static)
  for (int r = 0; r < num_runs; ++r) {
    SessionTrace trace = run_session(m, channel, cp, d, horizon, derive_seed(seed, r));
    per_run[r] = trace.mean_distortion;
  }
  double mean = 0.0;
  for (double v : per_run) mean += v;
  mean /= num_runs;
  double var = 0.0;
  for (double v : per_run) var += (v - mean) * (v - mean);
  var = num_runs > 1 ? var / (num_runs - 1) : 0.0;
  return {mean, std::sqrt(var / num_runs)};
}

}  // namespace zdq
