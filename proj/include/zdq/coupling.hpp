#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "zdq/solver.hpp"

namespace zdq {

// Constants behind the O(1/T) convergence bound: tau is the first time two
// independent copies of the chain occupy the reference state together,
// K1 = max_{x,y} E[tau | X0=x, Y0=y], and K = 2 K1 ||d||_inf |X|.
struct CouplingReport {
  int num_states = 0;
  int reference_state = 0;  // 0-based
  Matrix expected_tau;      // E[tau | X0=x, Y0=y]
  double k1 = 0.0;
  double d_inf = 0.0;
  double k = 0.0;
};

// Hitting times of (b,b) for the product chain with independent coordinates,
// from every start pair, via a dense linear solve over |X|^2 unknowns.
// Requires an irreducible aperiodic P; the solve residual is checked to 1e-9.
Matrix expected_coupling_times(const Matrix& p, int reference_state);

// The reference state minimizing K1 (the bound holds for every choice, so the
// tightest one is used); ties go to the smallest state.
std::pair<int, double> choose_reference_state(const Matrix& p);

CouplingReport make_coupling_report(const MarkovModel& m, const DistortionSpec& d);

struct TauSamples {
  Matrix mean;  // sample mean per requested start pair, NaN elsewhere
  Matrix se;    // standard error of the mean
};

// Simulates the two conditionally independent copies and averages tau per
// start pair. Runs are distributed over threads with per-run derived seeds
// and index-ordered aggregation, so results do not depend on worker count.
TauSamples monte_carlo_tau(const Matrix& p, int reference_state,
                           const std::vector<std::pair<int, int>>& pairs, int runs,
                           std::uint64_t seed);

// Max over the given grid-point pairs of
//   |J_beta(mu) - J_beta(zeta)| - K1 ||d||_inf rho1(mu, zeta);
// a value above the grid slack signals a defect.
double verify_lipschitz(const MarkovModel& m, const DistortionSpec& d, int num_symbols,
                        std::shared_ptr<const BeliefGrid> grid, double beta,
                        const std::vector<std::pair<int, int>>& grid_pairs,
                        const SolverOptions& opts = {});

}  // namespace zdq
