#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "zdq/belief.hpp"
#include "zdq/rng.hpp"

using namespace zdq;

namespace {

Belief random_belief(std::mt19937_64& gen, int n, bool allow_zero = false) {
  std::vector<double> p(n);
  double s = 0.0;
  for (double& v : p) {
    v = uniform01(gen);
    if (allow_zero && uniform01(gen) < 0.25) v = 0.0;
    s += v;
  }
  if (s == 0.0) p[0] = s = 1.0;
  for (double& v : p) v /= s;
  return Belief(std::move(p));
}

// Transport oracle: build the optimal coupling by matching the two mass
// profiles in sorted state order (the quantile coupling, optimal for the
// line) and price it at |x - y|.
double transport_wasserstein(const Belief& mu, const Belief& zeta) {
  const int n = mu.size();
  std::vector<double> supply(mu.probs), demand(zeta.probs);
  double cost = 0.0;
  int i = 0, j = 0;
  while (i < n && j < n) {
    if (supply[i] <= 1e-17) {
      ++i;
      continue;
    }
    if (demand[j] <= 1e-17) {
      ++j;
      continue;
    }
    double moved = std::min(supply[i], demand[j]);
    cost += moved * std::abs(i - j);
    supply[i] -= moved;
    demand[j] -= moved;
  }
  return cost;
}

long long binom(int n, int k) {
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

constexpr int kBsymbol0 = 0;

}  // namespace

TEST_CASE("channel builders") {
  Channel id = Channel::noiseless(3);
  CHECK(id.input_size() == 3);
  CHECK(id.output_size() == 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(id.t.at(i, j) == (i == j ? 1.0 : 0.0));

  Channel bsc = Channel::bsc(0.1);
  CHECK(bsc.t.at(0, 0) == doctest::Approx(0.9));
  CHECK(bsc.t.at(0, 1) == doctest::Approx(0.1));

  CHECK_THROWS_AS(Channel::from_matrix(Matrix::from_rows({{0.5, 0.6}})), error);
  CHECK_THROWS_AS(Channel::bsc(1.5), error);
}

TEST_CASE("grid size, distinctness and order") {
  auto grid = BeliefGrid::make(4, 3);
  CHECK(grid->size() == binom(4 + 3 - 1, 3 - 1));
  for (int i = 0; i < grid->size(); ++i) {
    CHECK_NOTHROW(check_belief(grid->point(i)));
    if (i > 0) CHECK(grid->point(i - 1).probs < grid->point(i).probs);
  }
  CHECK(BeliefGrid::make(100, 2)->size() == 101);
  CHECK(BeliefGrid::make(10, 4)->size() == binom(13, 3));
}

TEST_CASE("filter update on singleton, full, and mixed cells") {
  Matrix p = Matrix::from_rows({{0.9, 0.1}, {0.2, 0.8}});
  Quantizer identity{{0, 1}, 2};
  Quantizer constant{{0, 0}, 2};

  // singleton codecell: the new belief is the corresponding row of P
  Belief pi({0.4, 0.6});
  Belief out = filter_update(pi, identity, 1, p);
  CHECK(out[0] == 0.2);
  CHECK(out[1] == 0.8);

  // uninformative quantizer: one step of the prior, pi P
  Belief prior = filter_update(Belief({0.5, 0.5}), constant, 0, p);
  CHECK(prior[0] == doctest::Approx(0.55).epsilon(1e-15));
  CHECK(prior[1] == doctest::Approx(0.45).epsilon(1e-15));

  CHECK_NOTHROW(check_belief(out));
  CHECK_NOTHROW(check_belief(prior));
}

TEST_CASE("filter update rejects impossible symbols") {
  Matrix p = Matrix::from_rows({{0.9, 0.1}, {0.2, 0.8}});
  Quantizer identity{{0, 1}, 2};
  CHECK_THROWS_AS(filter_update(Belief({1.0, 0.0}), identity, 1, p), error);
  try {
    filter_update(Belief({1.0, 0.0}), identity, 1, p);
  } catch (const error& e) {
    CHECK(e.code() == errc::zero_probability_symbol);
  }
}

TEST_CASE("symbol probabilities partition the belief mass") {
  Quantizer constant{{0, 0}, 2};
  CHECK(symbol_probability(Belief({0.3, 0.7}), constant, 0) == 1.0);
  CHECK(symbol_probability(Belief({0.3, 0.7}), constant, 1) == 0.0);
  Quantizer identity{{0, 1}, 2};
  CHECK(symbol_probability(Belief({0.3, 0.7}), identity, 0) == 0.3);
  CHECK(symbol_probability(Belief({0.3, 0.7}), identity, 1) == 0.7);

  std::mt19937_64 gen(3);
  for (int trial = 0; trial < 50; ++trial) {
    Belief pi = random_belief(gen, 4, true);
    for (const auto& q : enumerate_quantizers(4, 3, DedupMode::labeled)) {
      double total = 0.0;
      for (int s = 0; s < 3; ++s) total += symbol_probability(pi, q, s);
      CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("filter satisfies the total-probability identity") {
  std::mt19937_64 gen(5);
  Matrix p = Matrix::from_rows({{0.7, 0.2, 0.1}, {0.3, 0.3, 0.4}, {0.05, 0.9, 0.05}});
  for (int trial = 0; trial < 50; ++trial) {
    Belief pi = random_belief(gen, 3, true);
    for (const auto& q : enumerate_quantizers(3, 2, DedupMode::partition)) {
      std::vector<double> mixed(3, 0.0);
      for (int s = 0; s < 2; ++s) {
        double w = symbol_probability(pi, q, s);
        if (w <= 1e-15) continue;
        Belief child = filter_update(pi, q, s, p);
        for (int x = 0; x < 3; ++x) mixed[x] += w * child[x];
      }
      for (int x2 = 0; x2 < 3; ++x2) {
        double expect = 0.0;
        for (int x = 0; x < 3; ++x) expect += pi[x] * p.at(x, x2);
        CHECK(mixed[x2] == doctest::Approx(expect).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("noisy filter reduces to the noiseless filter over the identity channel") {
  std::mt19937_64 gen(7);
  Matrix p = Matrix::from_rows({{0.9, 0.1}, {0.2, 0.8}});
  Channel id = Channel::noiseless(2);
  for (int trial = 0; trial < 100; ++trial) {
    Belief pi = random_belief(gen, 2, true);
    for (const auto& q : enumerate_quantizers(2, 2, DedupMode::labeled)) {
      for (int s = 0; s < 2; ++s) {
        double mass = symbol_probability(pi, q, s);
        CHECK(noisy_symbol_probability(pi, q, s, id) == mass);
        if (mass <= 1e-15) continue;
        Belief a = filter_update(pi, q, s, p);
        Belief b = noisy_filter_update(pi, q, s, p, id);
        CHECK(a.probs == b.probs);  // bit-identical
      }
    }
  }
}

TEST_CASE("uniform channel output carries no information") {
  Matrix p = Matrix::from_rows({{0.9, 0.1}, {0.2, 0.8}});
  Channel uniform = Channel::from_matrix(Matrix::from_rows({{0.5, 0.5}, {0.5, 0.5}}));
  Quantizer identity{{0, 1}, 2};
  Belief pi({0.3, 0.7});
  for (int s = 0; s < 2; ++s) {
    Belief out = noisy_filter_update(pi, identity, s, p, uniform);
    CHECK(out[0] == doctest::Approx(0.3 * 0.9 + 0.7 * 0.2).epsilon(1e-14));
    CHECK(out[1] == doctest::Approx(0.3 * 0.1 + 0.7 * 0.8).epsilon(1e-14));
    CHECK(noisy_symbol_probability(pi, identity, s, uniform) == doctest::Approx(0.5));
  }
}

TEST_CASE("binary symmetric channel performs the textbook Bayes update") {
  Matrix p = Matrix::identity(2);
  Channel bsc = Channel::bsc(0.1);
  Quantizer identity{{0, 1}, 2};
  Belief out = noisy_filter_update(Belief({0.5, 0.5}), identity, kBsymbol0, p, bsc);
  CHECK(out[0] == doctest::Approx(0.9).epsilon(1e-14));
  CHECK(out[1] == doctest::Approx(0.1).epsilon(1e-14));
}

TEST_CASE("noisy total-probability identity") {
  std::mt19937_64 gen(9);
  Matrix p = Matrix::from_rows({{0.9, 0.1}, {0.2, 0.8}});
  Channel bsc = Channel::bsc(0.17);
  for (int trial = 0; trial < 50; ++trial) {
    Belief pi = random_belief(gen, 2, true);
    for (const auto& q : enumerate_quantizers(2, 2, DedupMode::labeled)) {
      std::vector<double> mixed(2, 0.0);
      double wsum = 0.0;
      for (int s = 0; s < 2; ++s) {
        double w = noisy_symbol_probability(pi, q, s, bsc);
        wsum += w;
        if (w <= 1e-15) continue;
        Belief child = noisy_filter_update(pi, q, s, p, bsc);
        for (int x = 0; x < 2; ++x) mixed[x] += w * child[x];
      }
      CHECK(wsum == doctest::Approx(1.0).epsilon(1e-12));
      for (int x2 = 0; x2 < 2; ++x2) {
        double expect = pi[0] * p.at(0, x2) + pi[1] * p.at(1, x2);
        CHECK(mixed[x2] == doctest::Approx(expect).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("noisy stage cost reduces exactly to the noiseless cost") {
  std::mt19937_64 gen(11);
  DistortionSpec ham = DistortionSpec::hamming(3);
  Channel id = Channel::noiseless(2);
  for (int trial = 0; trial < 50; ++trial) {
    Belief pi = random_belief(gen, 3, true);
    for (const auto& q : enumerate_quantizers(3, 2, DedupMode::labeled))
      CHECK(noisy_stage_cost(pi, q, ham, id) == stage_cost(pi, q, ham));
  }
}

TEST_CASE("wasserstein1 on fixed pairs") {
  CHECK(wasserstein1(Belief({0.4, 0.6}), Belief({0.4, 0.6})) == 0.0);
  CHECK(wasserstein1(Belief({1.0, 0.0}), Belief({0.0, 1.0})) == 1.0);
  CHECK(wasserstein1(Belief({0.75, 0.25}), Belief({0.25, 0.75})) ==
        doctest::Approx(0.5).epsilon(1e-15));
  // three states: move 0.5 of mass across distance 2
  CHECK(wasserstein1(Belief({0.5, 0.5, 0.0}), Belief({0.0, 0.5, 0.5})) ==
        doctest::Approx(0.5 + 0.5).epsilon(1e-15));
  CHECK_THROWS_AS(wasserstein1(Belief({1.0}), Belief({0.5, 0.5})), error);
}

TEST_CASE("wasserstein1 agrees with the transport-coupling oracle") {
  std::mt19937_64 gen(13);
  for (int trial = 0; trial < 300; ++trial) {
    int n = 2 + static_cast<int>(gen() % 4);
    Belief mu = random_belief(gen, n, true);
    Belief zeta = random_belief(gen, n, true);
    CHECK(wasserstein1(mu, zeta) ==
          doctest::Approx(transport_wasserstein(mu, zeta)).epsilon(1e-12));
  }
}

TEST_CASE("wasserstein1 is a bounded metric") {
  std::mt19937_64 gen(17);
  for (int trial = 0; trial < 200; ++trial) {
    int n = 2 + static_cast<int>(gen() % 3);
    Belief a = random_belief(gen, n), b = random_belief(gen, n), c = random_belief(gen, n);
    double ab = wasserstein1(a, b);
    CHECK(ab == wasserstein1(b, a));
    CHECK(ab >= 0.0);
    CHECK(ab <= n - 1 + 1e-15);
    CHECK(ab <= wasserstein1(a, c) + wasserstein1(c, b) + 1e-12);
  }
  // mismatch probability on two points equals the metric exactly
  std::mt19937_64 gen2(19);
  for (int trial = 0; trial < 50; ++trial) {
    Belief mu = random_belief(gen2, 2), zeta = random_belief(gen2, 2);
    double overlap = std::min(mu[0], zeta[0]) + std::min(mu[1], zeta[1]);
    CHECK(1.0 - overlap == doctest::Approx(wasserstein1(mu, zeta)).epsilon(1e-12));
  }
}

TEST_CASE("projection returns grid points unchanged") {
  auto grid = BeliefGrid::make(6, 3);
  for (int i = 0; i < grid->size(); ++i) CHECK(project_to_grid(grid->point(i), *grid) == i);
}

TEST_CASE("projection picks the nearest lattice point") {
  auto grid = BeliefGrid::make(10, 2);
  int idx = grid->project(Belief({0.32, 0.68}));
  CHECK(grid->point(idx)[0] == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(grid->point(idx)[1] == doctest::Approx(0.7).epsilon(1e-15));
}

TEST_CASE("projection matches the exhaustive search, including ties") {
  std::mt19937_64 gen(23);
  for (int resolution : {2, 3, 7}) {
    for (int n : {2, 3, 4}) {
      auto grid = BeliefGrid::make(resolution, n);
      for (int trial = 0; trial < 60; ++trial) {
        Belief pi = random_belief(gen, n, true);
        int mine = grid->project(pi);
        int exhaustive = 0;
        double best = wasserstein1(pi, grid->point(0));
        for (int i = 1; i < grid->size(); ++i) {
          double w = wasserstein1(pi, grid->point(i));
          if (w < best) {
            best = w;
            exhaustive = i;
          }
        }
        CHECK(wasserstein1(pi, grid->point(mine)) == doctest::Approx(best).epsilon(1e-12));
        CHECK(mine == exhaustive);
      }
    }
  }
  // deliberate half-integer tie: both (0,.5,.5) and (.5,0,.5) are nearest,
  // the lexicographically smaller point wins
  auto grid = BeliefGrid::make(2, 3);
  int idx = grid->project(Belief({0.25, 0.25, 0.5}));
  CHECK(grid->point(idx).probs == std::vector<double>{0.0, 0.5, 0.5});
}

TEST_CASE("projection error stays within the covering radius") {
  std::mt19937_64 gen(29);
  auto grid = BeliefGrid::make(50, 3);
  for (int trial = 0; trial < 200; ++trial) {
    Belief pi = random_belief(gen, 3);
    CHECK(wasserstein1(pi, grid->point(grid->project(pi))) <= 3.0 / 100.0 + 1e-12);
  }
}
