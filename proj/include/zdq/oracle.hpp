#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "zdq/quantizer.hpp"

namespace zdq {

// Zero-delay policy in raw history-table form: the encoder at stage t maps
// (channel-symbol history of length t, current source symbol) to a channel
// symbol, the decoder maps the history of length t+1 to a reproduction.
// History index h evolves as h' = h * M + q.
struct OraclePolicy {
  int num_states = 0;
  int num_symbols = 0;
  int reproduction_size = 0;
  int horizon = 0;
  std::vector<std::vector<int>> encoder;  // [t]: M^t * |X| entries in [0,M)
  std::vector<std::vector<int>> decoder;  // [t]: M^(t+1) entries in [0,|Xhat|)
};

// Exact minimum of (1/T) E[sum d] over every encoder table, each paired with
// its optimal decoder (argmin of conditional expected distortion per
// history). Expectations are exact path enumerations in a fixed summation
// order. Ties resolve to the lexicographically smallest table.
std::pair<double, OraclePolicy> exhaustive_min(const MarkovModel& m, const DistortionSpec& d,
                                               int num_symbols, int horizon,
                                               std::int64_t cap = 1 << 24);

// Exact expected average distortion of a complete table pair.
double evaluate_oracle_policy(const OraclePolicy& policy, const MarkovModel& m,
                              const DistortionSpec& d);

// Fills the optimal decoder for the given encoder tables.
OraclePolicy complete_policy(std::vector<std::vector<int>> encoder, const MarkovModel& m,
                             const DistortionSpec& d, int num_symbols, int horizon);

}  // namespace zdq
