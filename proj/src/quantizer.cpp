#include "zdq/quantizer.hpp"

#include <algorithm>
#include <cmath>

namespace zdq {

DistortionSpec DistortionSpec::from_matrix(Matrix m) {
  if (m.rows < 1 || m.cols < 1) fail(errc::dimension_mismatch, "empty distortion matrix");
  DistortionSpec spec;
  spec.d = std::move(m);
  for (double v : spec.d.a) {
    if (v < 0.0) fail(errc::negative_entry, "distortion entries must be nonnegative");
    if (!std::isfinite(v)) fail(errc::negative_entry, "distortion entries must be finite");
    spec.d_inf = std::max(spec.d_inf, v);
  }
  return spec;
}

DistortionSpec DistortionSpec::hamming(int n) {
  Matrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m.at(i, j) = (i == j) ? 0.0 : 1.0;
  return from_matrix(std::move(m));
}

std::vector<Quantizer> enumerate_quantizers(int num_states, int num_symbols, DedupMode mode,
                                            std::int64_t cap) {
  if (num_states < 1 || num_symbols < 1)
    fail(errc::dimension_mismatch, "enumerate_quantizers needs num_states >= 1 and M >= 1");

  std::int64_t total = 1;
  for (int i = 0; i < num_states; ++i) {
    if (total > cap / num_symbols + 1) total = cap + 1;
    else total *= num_symbols;
    if (total > cap)
      fail(errc::action_space_too_large,
           "quantizer space M^|X| exceeds cap of " + std::to_string(cap));
  }

  std::vector<Quantizer> out;
  std::vector<int> labels(num_states, 0);
  if (mode == DedupMode::labeled) {
    out.reserve(static_cast<size_t>(total));
    while (true) {
      out.push_back({labels, num_symbols});
      int i = num_states - 1;
      while (i >= 0 && labels[i] == num_symbols - 1) labels[i--] = 0;
      if (i < 0) break;
      ++labels[i];
    }
  } else {
    // Restricted growth strings: labels[0] = 0 and labels[i] <= max(prefix)+1.
    // These are exactly the first-appearance canonical labelings.
    auto recurse = [&](auto&& self, int i, int used) -> void {
      if (i == num_states) {
        out.push_back({labels, num_symbols});
        return;
      }
      int limit = std::min(used + 1, num_symbols);
      for (int v = 0; v < limit; ++v) {
        labels[i] = v;
        self(self, i + 1, std::max(used, v + 1));
      }
    };
    recurse(recurse, 0, 0);
  }
  return out;
}

double stage_cost(const Belief& pi, const Quantizer& q, const DistortionSpec& d) {
  const int n = q.size();
  if (pi.size() != n || d.source_size() != n)
    fail(errc::dimension_mismatch, "stage_cost: incompatible dimensions");
  double total = 0.0;
  for (int cell = 0; cell < q.num_symbols; ++cell) {
    double best = -1.0;
    for (int xhat = 0; xhat < d.reproduction_size(); ++xhat) {
      double s = 0.0;
      for (int x = 0; x < n; ++x)
        if (q.labels[x] == cell) s += pi[x] * d.d.at(x, xhat);
      if (best < 0.0 || s < best) best = s;
    }
    total += best;
  }
  return total;
}

int optimal_reproduction(const Belief& pi, const Quantizer& q, const DistortionSpec& d, int cell) {
  const int n = q.size();
  int best = 0;
  double best_cost = -1.0;
  for (int xhat = 0; xhat < d.reproduction_size(); ++xhat) {
    double s = 0.0;
    for (int x = 0; x < n; ++x)
      if (q.labels[x] == cell) s += pi[x] * d.d.at(x, xhat);
    if (best_cost < 0.0 || s < best_cost) {
      best_cost = s;
      best = xhat;
    }
  }
  return best;
}

}  // namespace zdq
