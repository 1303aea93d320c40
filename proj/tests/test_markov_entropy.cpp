#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "streamrate/errors.hpp"
#include "streamrate/markov_entropy.hpp"

using namespace streamrate;

namespace {

oracle::Table random_table(std::mt19937_64& gen, int n) {
  std::uniform_real_distribution<double> u(0.05, 1.0);
  oracle::Table P(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n)));
  for (auto& row : P) {
    double sum = 0.0;
    for (auto& x : row) sum += (x = u(gen));
    for (auto& x : row) x /= sum;
  }
  return P;
}

Matrix to_matrix(const oracle::Table& P) {
  Matrix M(P.size(), P.size());
  for (std::size_t a = 0; a < P.size(); ++a)
    for (std::size_t b = 0; b < P.size(); ++b) M(a, b) = P[a][b];
  return M;
}

}  // namespace

TEST_CASE("binary entropy values") {
  Vector p(2);
  p << 0.1, 0.9;
  CHECK(entropy_bits(p) == doctest::Approx(0.468996).epsilon(1e-6));
  p << 0.18, 0.82;
  CHECK(entropy_bits(p) == doctest::Approx(0.680077).epsilon(1e-6));
  p << 1.0, 0.0;
  CHECK(entropy_bits(p) == 0.0);
}

TEST_CASE("binary symmetric chain lags") {
  const auto chain = MarkovChain::binary_symmetric(0.1);
  CHECK(conditional_entropy_lag(chain, 1) == doctest::Approx(oracle::hb(0.1)).epsilon(1e-12));
  // two flips compose into flip probability 2q(1-q)
  CHECK(conditional_entropy_lag(chain, 2) == doctest::Approx(oracle::hb(0.18)).epsilon(1e-12));
  CHECK_THROWS_AS(conditional_entropy_lag(chain, 0), ValidationError);
}

TEST_CASE("lossless bounds at q = 0.1, B = 1, W = 1") {
  const auto b = lossless_bounds(MarkovChain::binary_symmetric(0.1), 1, 1);
  CHECK(b.upper == doctest::Approx(0.574537).epsilon(1e-5));
  CHECK(b.lower == doctest::Approx(0.529771).epsilon(1e-5));
  CHECK(b.predictive_rate == doctest::Approx(0.468996).epsilon(1e-5));
}

TEST_CASE("bounds match brute-force path enumeration") {
  std::mt19937_64 gen(7);
  for (int trial = 0; trial < 12; ++trial) {
    const int n = 2 + trial % 3;
    const auto P = random_table(gen, n);
    const auto chain = MarkovChain::from_transition(to_matrix(P));
    const int max_len = n == 4 ? 5 : 7;
    const oracle::PathLaw law(P, max_len);
    const double h1 = law.conditional_entropy({1}, {0});
    for (int B = 0; B <= 3; ++B)
      for (int W = 0; B + W + 1 <= max_len; ++W) {
        CAPTURE(n);
        CAPTURE(B);
        CAPTURE(W);
        const auto b = lossless_bounds(chain, B, W);
        const double up = h1 + law.mutual_information({B}, {B + 1}, {0}) / (W + 1);
        const double lo = h1 + law.mutual_information({B}, {B + W + 1}, {0}) / (W + 1);
        CHECK(b.upper == doctest::Approx(up).epsilon(1e-10));
        CHECK(b.lower == doctest::Approx(lo).epsilon(1e-10));
        CHECK(b.lower <= b.upper + 1e-12);
        std::vector<int> window;
        for (int k = B + 1; k <= B + W + 1; ++k) window.push_back(k);
        CHECK(window_conditional_entropy(chain, B, W) == doctest::Approx(law.conditional_entropy(window, {0})).epsilon(1e-10));
        for (int lag = 1; lag <= max_len; ++lag)
          CHECK(conditional_entropy_lag(chain, lag) == doctest::Approx(law.conditional_entropy({lag}, {0})).epsilon(1e-10));
      }
  }
}

TEST_CASE("multiterminal sum rate equals twice the lower bound at B = W = 1") {
  std::mt19937_64 gen(11);
  for (int n = 2; n <= 4; ++n) {
    const auto P = random_table(gen, n);
    const auto chain = MarkovChain::from_transition(to_matrix(P));
    const oracle::PathLaw law(P, 3);
    const double direct = law.conditional_entropy({1}, {0, 2}) + law.conditional_entropy({3}, {0});
    CHECK(multiterminal_sum_rate(chain) == doctest::Approx(direct).epsilon(1e-10));
    CHECK(multiterminal_sum_rate(chain) == doctest::Approx(2.0 * lossless_bounds(chain, 1, 1).lower).epsilon(1e-10));
  }
}

TEST_CASE("bounds coincide at W = 0 and approach each other as W grows") {
  const auto chain = MarkovChain::binary_symmetric(0.2);
  for (int B = 0; B <= 4; ++B) {
    const auto b = lossless_bounds(chain, B, 0);
    CHECK(b.upper == doctest::Approx(b.lower).epsilon(1e-12));
  }
  const auto wide = lossless_bounds(chain, 2, 200);
  CHECK(wide.upper - wide.lower < 1e-2);
  CHECK(wide.lower == doctest::Approx(wide.predictive_rate).epsilon(1e-2));
}

TEST_CASE("B = 0 gives the predictive coding rate") {
  const auto b = lossless_bounds(MarkovChain::binary_symmetric(0.3), 0, 2);
  CHECK(b.upper == doctest::Approx(oracle::hb(0.3)).epsilon(1e-12));
  CHECK(b.lower == doctest::Approx(oracle::hb(0.3)).epsilon(1e-12));
}

TEST_CASE("degenerate chains") {
  // deterministic alternation: zero predictive rate, stationary law uniform
  Matrix flip(2, 2);
  flip << 0, 1, 1, 0;
  const auto chain = MarkovChain::from_transition(flip);
  CHECK(chain.stationary()(0) == doctest::Approx(0.5));
  CHECK(lossless_bounds(chain, 2, 1).upper == doctest::Approx(0.0).epsilon(1e-12));

  CHECK(conditional_entropy_lag(MarkovChain::binary_symmetric(0.0), 3) == 0.0);
  const auto iid = MarkovChain::binary_symmetric(0.5);
  CHECK(lossless_bounds(iid, 3, 2).upper == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("stationary distribution validation") {
  Matrix bad(2, 2);
  bad << 0.5, 0.6, 0.5, 0.5;
  CHECK_THROWS_AS(stationary_distribution(bad), ValidationError);
  bad << -0.1, 1.1, 0.5, 0.5;
  CHECK_THROWS_AS(stationary_distribution(bad), ValidationError);
  CHECK_THROWS_AS(stationary_distribution(Matrix::Identity(2, 2)), ConvergenceError);

  Matrix P(3, 3);
  P << 0.5, 0.3, 0.2, 0.1, 0.8, 0.1, 0.25, 0.25, 0.5;
  const Vector pi = stationary_distribution(P);
  CHECK((pi.transpose() * P - pi.transpose()).lpNorm<1>() < 1e-12);
  CHECK(pi.sum() == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("chain JSON input") {
  const auto chain = MarkovChain::from_json(R"({"alphabet_size": 2, "transition": [[0.9, 0.1], [0.1, 0.9]]})");
  CHECK(chain.alphabet_size() == 2);
  CHECK(is_symmetric(chain, 1e-12));
  CHECK_THROWS_AS(MarkovChain::from_json(R"({"alphabet_size": 3, "transition": [[0.9, 0.1], [0.1, 0.9]]})"),
                  ValidationError);
  CHECK_THROWS_AS(MarkovChain::from_json("not json"), ValidationError);
  CHECK_THROWS_AS(MarkovChain::from_json(R"({"transition": [[0.9, 0.2], [0.1, 0.9]]})"), ValidationError);
}

TEST_CASE("transition powers") {
  const auto chain = MarkovChain::binary_symmetric(0.1);
  CHECK(chain.transition_power(0).isApprox(Matrix::Identity(2, 2)));
  CHECK(chain.transition_power(5).isApprox(chain.transition() * chain.transition() * chain.transition() *
                                           chain.transition() * chain.transition()));
}
