#pragma once

#include <cstdint>
#include <vector>

#include "zdq/source.hpp"

namespace zdq {

// Map from the source alphabet into channel symbols {1..M} (0-based in code).
// Preimages of symbols are the codecells.
struct Quantizer {
  std::vector<int> labels;  // size |X|, entries in [0, num_symbols)
  int num_symbols = 0;

  int operator()(int x) const { return labels[x]; }
  int size() const { return static_cast<int>(labels.size()); }
  bool operator==(const Quantizer&) const = default;
};

// Single-letter distortion d(x, xhat) with its cached sup norm.
struct DistortionSpec {
  Matrix d;  // |X| x |Xhat|, nonnegative entries
  double d_inf = 0.0;

  int source_size() const { return d.rows; }
  int reproduction_size() const { return d.cols; }

  static DistortionSpec from_matrix(Matrix m);
  static DistortionSpec hamming(int n);

  bool operator==(const DistortionSpec&) const = default;
};

enum class DedupMode { labeled, partition };

// Every M-ary labeling of the source alphabet, or one canonical representative
// per induced partition into at most M cells (labels in order of first
// appearance). `labeled` order is lexicographic in the label vector; the
// canonical representatives appear in the same relative order.
std::vector<Quantizer> enumerate_quantizers(int num_states, int num_symbols, DedupMode mode,
                                            std::int64_t cap = 1'000'000);

// Expected distortion of quantizer q under belief pi with the best
// reproduction chosen per cell:  sum_i min_xhat sum_{x in cell i} pi(x) d(x,xhat).
double stage_cost(const Belief& pi, const Quantizer& q, const DistortionSpec& d);

// Argmin reproduction for one codecell; ties break to the smallest index, and
// a cell with no pi-mass maps to reproduction 0.
int optimal_reproduction(const Belief& pi, const Quantizer& q, const DistortionSpec& d, int cell);

}  // namespace zdq
