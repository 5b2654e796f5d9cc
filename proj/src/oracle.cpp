#include "zdq/oracle.hpp"

#include <algorithm>
#include <cmath>

#include "zdq/parallel.hpp"

namespace zdq {

namespace {

// Forward measure at stage t: alpha[h * |X| + x] = P(history = h, X_t = x).
// One stage of the exhaustive evaluation: apply the stage-t encoder table,
// charge the decoder-optimal cost per extended history, and push the measure
// forward through P.
double advance_stage(const std::vector<double>& alpha, const std::vector<int>& eta,
                     std::int64_t num_histories, const MarkovModel& m, const DistortionSpec& d,
                     int num_symbols, std::vector<double>* alpha_next,
                     std::vector<int>* decoder_row) {
  const int n = m.num_states;
  const int nhat = d.reproduction_size();
  double cost = 0.0;
  if (alpha_next) alpha_next->assign(num_histories * num_symbols * n, 0.0);
  if (decoder_row) decoder_row->assign(num_histories * num_symbols, 0);

  std::vector<double> beta(n);
  for (std::int64_t h = 0; h < num_histories; ++h) {
    for (int q = 0; q < num_symbols; ++q) {
      for (int x = 0; x < n; ++x)
        beta[x] = (eta[h * n + x] == q) ? alpha[h * n + x] : 0.0;
      double best = -1.0;
      int best_xhat = 0;
      for (int xhat = 0; xhat < nhat; ++xhat) {
        double s = 0.0;
        for (int x = 0; x < n; ++x) s += beta[x] * d.d.at(x, xhat);
        if (best < 0.0 || s < best) {
          best = s;
          best_xhat = xhat;
        }
      }
      cost += best;
      if (decoder_row) (*decoder_row)[h * num_symbols + q] = best_xhat;
      if (alpha_next) {
        double* row = alpha_next->data() + (h * num_symbols + q) * n;
        for (int x = 0; x < n; ++x) {
          if (beta[x] == 0.0) continue;
          for (int x2 = 0; x2 < n; ++x2) row[x2] += beta[x] * m.transition.at(x, x2);
        }
      }
    }
  }
  return cost;
}

struct Search {
  const MarkovModel& m;
  const DistortionSpec& d;
  int num_symbols;
  int horizon;
  std::vector<std::vector<int>> tables;   // current encoder digits per stage
  std::vector<std::int64_t> num_histories;
  double best_value = -1.0;
  std::vector<std::vector<int>> best_tables;

  // Enumerates every stage-t table in lexicographic order; candidates are
  // therefore visited in lexicographic order of the concatenated digits, and
  // keeping the first strict improvement realizes the smallest-index
  // tie-break.
  void recurse(int t, const std::vector<double>& alpha, double cost_so_far) {
    if (t == horizon) {
      if (best_value < 0.0 || cost_so_far < best_value) {
        best_value = cost_so_far;
        best_tables = tables;
      }
      return;
    }
    auto& eta = tables[t];
    std::fill(eta.begin(), eta.end(), 0);
    std::vector<double> alpha_next;
    while (true) {
      double c = advance_stage(alpha, eta, num_histories[t], m, d, num_symbols,
                               t + 1 < horizon ? &alpha_next : nullptr, nullptr);
      if (t + 1 < horizon)
        recurse(t + 1, alpha_next, cost_so_far + c);
      else if (best_value < 0.0 || cost_so_far + c < best_value) {
        best_value = cost_so_far + c;
        best_tables = tables;
      }
      int i = static_cast<int>(eta.size()) - 1;
      while (i >= 0 && eta[i] == num_symbols - 1) eta[i--] = 0;
      if (i < 0) break;
      ++eta[i];
    }
  }
};

}  // namespace

std::pair<double, OraclePolicy> exhaustive_min(const MarkovModel& m, const DistortionSpec& d,
                                               int num_symbols, int horizon, std::int64_t cap) {
  if (horizon < 1) fail(errc::dimension_mismatch, "horizon must be at least 1");
  if (num_symbols < 1) fail(errc::dimension_mismatch, "M must be at least 1");

  // Search size: product over stages of M^(M^t * |X|).
  double log_size = 0.0;
  std::int64_t histories = 1;
  std::vector<std::int64_t> num_histories(horizon);
  for (int t = 0; t < horizon; ++t) {
    num_histories[t] = histories;
    log_size += static_cast<double>(histories) * m.num_states * std::log2(num_symbols);
    histories *= num_symbols;
  }
  if (log_size > std::log2(static_cast<double>(cap)))
    fail(errc::search_space_too_large,
         "policy table space exceeds cap of " + std::to_string(cap));

  Search search{m, d, num_symbols, horizon, {}, num_histories, -1.0, {}};
  search.tables.resize(horizon);
  for (int t = 0; t < horizon; ++t)
    search.tables[t].assign(static_cast<size_t>(num_histories[t]) * m.num_states, 0);

  std::vector<double> alpha0(m.initial.probs);

  // Split the search over stage-0 tables. Chunk results merge in ascending
  // chunk order, which is the lexicographic order of the leading digits, so
  // the outcome does not depend on thread scheduling.
  std::int64_t stage0_count = 1;
  for (int i = 0; i < m.num_states; ++i) stage0_count *= num_symbols;
  std::vector<double> chunk_value(stage0_count, -1.0);
  std::vector<std::vector<std::vector<int>>> chunk_tables(stage0_count);

#pragma omp parallel for schedule(dynamic)
  for (std::int64_t c = 0; c < stage0_count; ++c) {
    Search local = search;
    auto& eta0 = local.tables[0];
    std::int64_t v = c;
    for (int i = m.num_states - 1; i >= 0; --i) {
      eta0[i] = static_cast<int>(v % num_symbols);
      v /= num_symbols;
    }
    std::vector<double> alpha_next;
    double c0 = advance_stage(alpha0, eta0, 1, m, d, num_symbols,
                              horizon > 1 ? &alpha_next : nullptr, nullptr);
    if (horizon > 1)
      local.recurse(1, alpha_next, c0);
    else {
      local.best_value = c0;
      local.best_tables = local.tables;
    }
    chunk_value[c] = local.best_value;
    chunk_tables[c] = std::move(local.best_tables);
  }

  double best = -1.0;
  std::int64_t best_chunk = 0;
  for (std::int64_t c = 0; c < stage0_count; ++c)
    if (best < 0.0 || chunk_value[c] < best) {
      best = chunk_value[c];
      best_chunk = c;
    }

  OraclePolicy policy = complete_policy(std::move(chunk_tables[best_chunk]), m, d, num_symbols,
                                        horizon);
  return {best / horizon, std::move(policy)};
}

OraclePolicy complete_policy(std::vector<std::vector<int>> encoder, const MarkovModel& m,
                             const DistortionSpec& d, int num_symbols, int horizon) {
  OraclePolicy p;
  p.num_states = m.num_states;
  p.num_symbols = num_symbols;
  p.reproduction_size = d.reproduction_size();
  p.horizon = horizon;
  p.encoder = std::move(encoder);
  p.decoder.resize(horizon);

  std::int64_t histories = 1;
  std::vector<double> alpha(m.initial.probs), alpha_next;
  for (int t = 0; t < horizon; ++t) {
    if (static_cast<std::int64_t>(p.encoder[t].size()) != histories * m.num_states)
      fail(errc::incomplete_table, "encoder table has the wrong size at stage " + std::to_string(t));
    advance_stage(alpha, p.encoder[t], histories, m, d, num_symbols,
                  t + 1 < horizon ? &alpha_next : nullptr, &p.decoder[t]);
    alpha.swap(alpha_next);
    histories *= num_symbols;
  }
  return p;
}

double evaluate_oracle_policy(const OraclePolicy& policy, const MarkovModel& m,
                              const DistortionSpec& d) {
  const int n = m.num_states;
  const int num_symbols = policy.num_symbols;
  if (static_cast<int>(policy.encoder.size()) != policy.horizon ||
      static_cast<int>(policy.decoder.size()) != policy.horizon)
    fail(errc::incomplete_table, "policy is missing stage tables");

  std::int64_t histories = 1;
  std::vector<double> alpha(m.initial.probs), alpha_next, beta(n);
  double cost = 0.0;
  for (int t = 0; t < policy.horizon; ++t) {
    if (static_cast<std::int64_t>(policy.encoder[t].size()) != histories * n ||
        static_cast<std::int64_t>(policy.decoder[t].size()) != histories * num_symbols)
      fail(errc::incomplete_table, "stage table has the wrong size at stage " + std::to_string(t));
    const auto& eta = policy.encoder[t];
    const auto& gamma = policy.decoder[t];
    alpha_next.assign(static_cast<size_t>(histories) * num_symbols * n, 0.0);
    for (std::int64_t h = 0; h < histories; ++h) {
      for (int q = 0; q < num_symbols; ++q) {
        for (int x = 0; x < n; ++x)
          beta[x] = (eta[h * n + x] == q) ? alpha[h * n + x] : 0.0;
        int xhat = gamma[h * num_symbols + q];
        double s = 0.0;
        for (int x = 0; x < n; ++x) s += beta[x] * d.d.at(x, xhat);
        cost += s;
        double* row = alpha_next.data() + (h * num_symbols + q) * n;
        for (int x = 0; x < n; ++x) {
          if (beta[x] == 0.0) continue;
          for (int x2 = 0; x2 < n; ++x2) row[x2] += beta[x] * m.transition.at(x, x2);
        }
      }
    }
    alpha.swap(alpha_next);
    histories *= num_symbols;
  }
  return cost / policy.horizon;
}

}  // namespace zdq
