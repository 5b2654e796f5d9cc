#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numeric>
#include <random>

#include "zdq/rng.hpp"
#include "zdq/source.hpp"

using namespace zdq;

namespace {

MarkovModel model2(std::vector<std::vector<double>> p, std::vector<double> pi0) {
  return make_model(Matrix::from_rows(p), Belief(std::move(pi0)));
}

// Brute-force graph oracle: boolean adjacency powers.
struct BoolPowers {
  int n;
  std::vector<std::vector<char>> pow;  // pow[k] = reachability in exactly k+1 steps

  BoolPowers(const Matrix& p, int max_len) : n(p.rows) {
    std::vector<char> adj(n * n, 0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) adj[i * n + j] = p.at(i, j) > 0.0;
    pow.push_back(adj);
    for (int k = 1; k < max_len; ++k) {
      std::vector<char> next(n * n, 0);
      const auto& prev = pow.back();
      for (int i = 0; i < n; ++i)
        for (int l = 0; l < n; ++l)
          if (prev[i * n + l])
            for (int j = 0; j < n; ++j)
              if (adj[l * n + j]) next[i * n + j] = 1;
      pow.push_back(std::move(next));
    }
  }

  bool irreducible() const {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        bool reach = false;
        for (const auto& pk : pow)
          if (pk[i * n + j]) {
            reach = true;
            break;
          }
        if (!reach) return false;
      }
    return true;
  }

  bool aperiodic() const {
    for (int a = 0; a < n; ++a) {
      int g = 0;
      for (size_t k = 0; k < pow.size(); ++k)
        if (pow[k][a * n + a]) g = std::gcd(g, static_cast<int>(k) + 1);
      if (g != 1) return false;
    }
    return true;
  }
};

MarkovModel random_model(std::mt19937_64& gen, int n, bool sparse) {
  Matrix p(n, n);
  for (int i = 0; i < n; ++i) {
    double sum = 0.0;
    while (sum == 0.0) {
      for (int j = 0; j < n; ++j) {
        double v = uniform01(gen);
        if (sparse && uniform01(gen) < 0.45) v = 0.0;
        p.at(i, j) = v;
        sum += v;
      }
    }
    for (int j = 0; j < n; ++j) p.at(i, j) /= sum;
  }
  std::vector<double> pi0(n);
  double s = 0.0;
  for (double& v : pi0) s += v = 0.05 + uniform01(gen);
  for (double& v : pi0) v /= s;
  return make_model(std::move(p), Belief(std::move(pi0)));
}

}  // namespace

TEST_CASE("validate accepts stochastic models") {
  CHECK_NOTHROW(model2({{0.5, 0.5}, {0.5, 0.5}}, {1.0, 0.0}));
  // validity does not require irreducibility
  CHECK_NOTHROW(model2({{1.0, 0.0}, {0.0, 1.0}}, {0.5, 0.5}));
}

TEST_CASE("validate rejects bad rows") {
  CHECK_THROWS_AS(model2({{0.6, 0.5}, {0.5, 0.5}}, {1.0, 0.0}), error);
  try {
    model2({{0.6, 0.5}, {0.5, 0.5}}, {1.0, 0.0});
  } catch (const error& e) {
    CHECK(e.code() == errc::non_stochastic_matrix);
  }
  try {
    model2({{0.9, -0.1}, {0.5, 0.5}}, {1.0, 0.0});
  } catch (const error& e) {
    CHECK(e.code() == errc::negative_entry);
  }
  CHECK_THROWS_AS(model2({{0.5, 0.5}, {0.5, 0.5}}, {0.7, 0.7}), error);
}

TEST_CASE("irreducibility on fixed graphs") {
  CHECK_FALSE(is_irreducible(model2({{1, 0}, {0, 1}}, {0.5, 0.5})));
  CHECK(is_irreducible(model2({{0, 1}, {1, 0}}, {0.5, 0.5})));
  CHECK(is_irreducible(
      make_model(Matrix::from_rows({{0.9, 0.1, 0}, {0, 0.9, 0.1}, {0.1, 0, 0.9}}),
                 Belief({1.0, 0.0, 0.0}))));
  CHECK_FALSE(is_irreducible(
      make_model(Matrix::from_rows({{0.5, 0.5, 0}, {0.5, 0.5, 0}, {0.1, 0, 0.9}}),
                 Belief({1.0, 0.0, 0.0}))));
}

TEST_CASE("aperiodicity on fixed graphs") {
  CHECK_FALSE(is_aperiodic(model2({{0, 1}, {1, 0}}, {0.5, 0.5})));
  CHECK(is_aperiodic(model2({{0.5, 0.5}, {0.5, 0.5}}, {0.5, 0.5})));
  CHECK(is_aperiodic(model2({{0.9, 0.1}, {0.5, 0.5}}, {0.5, 0.5})));
  // period-3 cycle
  CHECK_FALSE(is_aperiodic(make_model(Matrix::from_rows({{0, 1, 0}, {0, 0, 1}, {1, 0, 0}}),
                                      Belief({1.0, 0.0, 0.0}))));
}

TEST_CASE("graph checks agree with boolean-power brute force") {
  std::mt19937_64 gen(20240811);
  for (int trial = 0; trial < 300; ++trial) {
    int n = 2 + static_cast<int>(gen() % 3);
    MarkovModel m = random_model(gen, n, true);
    BoolPowers oracle(m.transition, n * n + n);
    CHECK(is_irreducible(m) == oracle.irreducible());
    CHECK(is_aperiodic(m) == oracle.aperiodic());
  }
}

TEST_CASE("stationary distribution of symmetric chains is uniform") {
  for (double p : {0.1, 0.25, 0.5, 0.9}) {
    Belief pi = stationary_distribution(model2({{1 - p, p}, {p, 1 - p}}, {1.0, 0.0}));
    CHECK(pi[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(pi[1] == doctest::Approx(0.5).epsilon(1e-12));
  }
}

TEST_CASE("stationary distribution matches the hand-solved 2x2 system") {
  // pi P = pi with P = [[0.9,0.1],[0.5,0.5]]: 0.1 pi0 = 0.5 pi1 -> (5/6, 1/6).
  Belief pi = stationary_distribution(model2({{0.9, 0.1}, {0.5, 0.5}}, {1.0, 0.0}));
  CHECK(pi[0] == doctest::Approx(5.0 / 6.0).epsilon(1e-12));
  CHECK(pi[1] == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
}

TEST_CASE("stationary distribution of an iid chain is the common row") {
  auto m = make_model(Matrix::from_rows({{0.2, 0.5, 0.3}, {0.2, 0.5, 0.3}, {0.2, 0.5, 0.3}}),
                      Belief({1.0, 0.0, 0.0}));
  Belief pi = stationary_distribution(m);
  CHECK(pi[0] == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(pi[1] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(pi[2] == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("stationary distribution requires irreducibility") {
  CHECK_THROWS_AS(stationary_distribution(model2({{1, 0}, {0, 1}}, {0.5, 0.5})), error);
}

TEST_CASE("stationary distribution satisfies invariants on random chains") {
  std::mt19937_64 gen(7);
  for (int trial = 0; trial < 50; ++trial) {
    int n = 2 + static_cast<int>(gen() % 3);
    MarkovModel m = random_model(gen, n, false);
    if (!is_irreducible(m)) continue;
    Belief pi = stationary_distribution(m);
    CHECK_NOTHROW(check_belief(pi));
    double residual = 0.0;
    for (int j = 0; j < n; ++j) {
      double pj = 0.0;
      for (int i = 0; i < n; ++i) pj += pi[i] * m.transition.at(i, j);
      residual += std::abs(pj - pi[j]);
    }
    CHECK(residual <= 1e-10);
  }
}

TEST_CASE("sample_path is reproducible and respects absorbing dynamics") {
  auto m = model2({{0.9, 0.1}, {0.2, 0.8}}, {0.5, 0.5});
  auto a = sample_path(m, 1000, 42);
  auto b = sample_path(m, 1000, 42);
  CHECK(a == b);
  CHECK(a != sample_path(m, 1000, 43));

  auto frozen = model2({{1, 0}, {0, 1}}, {1.0, 0.0});
  for (int x : sample_path(frozen, 200, 9)) CHECK(x == 0);
}

TEST_CASE("sample_path transition frequencies match P within 3 standard errors") {
  auto m = model2({{0.9, 0.1}, {0.2, 0.8}}, {0.5, 0.5});
  const int steps = 100000;
  auto path = sample_path(m, steps, 1234);
  long counts[2][2] = {{0, 0}, {0, 0}};
  for (int t = 0; t + 1 < steps; ++t) ++counts[path[t]][path[t + 1]];
  for (int i = 0; i < 2; ++i) {
    double row_total = counts[i][0] + counts[i][1];
    REQUIRE(row_total > 1000);
    for (int j = 0; j < 2; ++j) {
      double p = m.transition.at(i, j);
      double se = std::sqrt(p * (1 - p) / row_total);
      CHECK(std::abs(counts[i][j] / row_total - p) <= 3 * se);
    }
  }
}
