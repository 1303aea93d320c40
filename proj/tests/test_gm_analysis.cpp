#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "streamrate/erasure_oracle.hpp"
#include "streamrate/errors.hpp"
#include "streamrate/gm_analysis.hpp"

using namespace streamrate;

namespace {

double quadratic_lower(double rho, int B, double D) {
  const double a = D;
  const double b = -(D * rho * rho + 1.0 - std::pow(rho, 2 * (B + 1)));
  const double c = rho * rho * (1.0 - std::pow(rho, 2 * B));
  return 0.5 * std::log2(oracle::larger_root(a, b, c));
}

/// Received set for decode time t with a burst [t-B, t-1].
std::vector<int> worst_single(int t, int B) {
  std::vector<int> out;
  for (int i = 0; i < t - B; ++i) out.push_back(i);
  return out;
}

}  // namespace

TEST_CASE("reference values at rho = 0.9, B = 1") {
  const GmConfig cfg{0.9, 1, 1, 0.2};
  CHECK(lower_bound_single(cfg) == doctest::Approx(0.560788).epsilon(1e-5));
  CHECK(rate_upper_multi(cfg).rate == doctest::Approx(0.624146).epsilon(1e-5));
  CHECK(high_res_rate({0.9, 1, 1, 0.01}) == doctest::Approx(2.55196).epsilon(1e-5));
}

TEST_CASE("lower bound equals the larger quadratic root") {
  for (double rho : {0.1, 0.5, 0.7, 0.9, 0.99})
    for (int B : {1, 2, 3, 5})
      for (double D : {1e-4, 0.01, 0.1, 0.3, 0.7, 0.95}) {
        CAPTURE(rho);
        CAPTURE(B);
        CAPTURE(D);
        CHECK(lower_bound_single({rho, B, 1, D}) == doctest::Approx(quadratic_lower(rho, B, D)).epsilon(1e-10));
      }
}

TEST_CASE("steady-state prediction error matches Riccati iteration") {
  for (double rho : {0.05, 0.5, 0.9, 0.999})
    for (double s : {1e-6, 1e-2, 0.1, 1.0, 10.0, 1e4, 1e8}) {
      CAPTURE(rho);
      CAPTURE(s);
      CHECK(kalman_steady_sigma(rho, s) == doctest::Approx(oracle::riccati_prediction(rho, s)).epsilon(1e-9));
    }
  // hand value
  CHECK(kalman_steady_sigma(0.9, 0.1) == doctest::Approx(0.24770).epsilon(1e-4));
}

TEST_CASE("single-burst distortion and rate") {
  const GmConfig cfg{0.9, 1, 1, 0.2};
  CHECK(gamma_single(cfg, {0.1}) == doctest::Approx(0.079618).epsilon(1e-5));
  const auto tc = solve_test_channel_single(cfg);
  CHECK(std::abs(gamma_single(cfg, tc) - cfg.D) <= 1e-10);
  CHECK(rate_upper_single(cfg) >= lower_bound_single(cfg));
  CHECK_THROWS_AS(solve_test_channel_single({0.9, 1, 1, 1.0}), ValidationError);
  CHECK(rate_upper_single({0.9, 1, 1, 1.5}) == 0.0);
  CHECK(lower_bound_single({0.9, 1, 1, 1.0}) == 0.0);
}

TEST_CASE("single-burst quantities agree with explicit conditioning at a long horizon") {
  const int t = 40;
  for (double rho : {0.7, 0.9})
    for (int B : {1, 2})
      for (double D : {0.1, 0.3}) {
        const GmConfig cfg{rho, B, 1, D};
        const auto tc = solve_test_channel_single(cfg);
        const GaussianSystem sys(rho, tc.sigma_z2, t);
        const auto p = ErasurePattern::single_burst(t, B, 0);
        CAPTURE(rho);
        CAPTURE(B);
        CAPTURE(D);
        CHECK(gamma(sys, p) == doctest::Approx(D).epsilon(1e-6));
        CHECK(lambda(sys, p) == doctest::Approx(rate_upper_single(cfg)).epsilon(1e-6));

        // the same with the test-side Gram-Schmidt conditioning
        oracle::Table cov(sys.covariance().rows(), std::vector<double>(sys.covariance().cols()));
        for (int a = 0; a < sys.covariance().rows(); ++a)
          for (int b = 0; b < sys.covariance().cols(); ++b) cov[a][b] = sys.covariance()(a, b);
        std::vector<int> given{sys.s(-1)};
        for (int i : worst_single(t, B)) given.push_back(sys.u(i));
        given.push_back(sys.u(t));
        CHECK(oracle::conditional_variance(cov, sys.s(t), given) == doctest::Approx(D).epsilon(1e-6));
      }
}

TEST_CASE("multi-burst rate") {
  SUBCASE("converges to the single-burst rate as L grows") {
    for (double D : {0.5, 0.8}) {
      const double single = rate_upper_single({0.9, 1, 1, D});
      double previous = rate_upper_multi({0.9, 1, 1, D}).rate;
      for (int L = 2; L <= 8; ++L) {
        const double r = rate_upper_multi({0.9, 1, L, D}).rate;
        CHECK(r <= previous + 1e-12);
        CHECK(r >= single - 1e-9);
        previous = r;
      }
      CHECK(std::abs(previous - single) < 1e-3);
    }
  }
  SUBCASE("distortion target met at the solved channel") {
    const GmConfig cfg{0.9, 2, 3, 0.3};
    const auto r = rate_upper_multi(cfg);
    CHECK(std::abs(gamma_multi(cfg, r.channel) - cfg.D) <= 1e-10);
    CHECK(r.rate >= rate_upper_single(cfg) - 1e-9);
  }
  SUBCASE("the scheme's distortion bounds the exact worst case") {
    for (int L : {1, 2, 3}) {
      const GmConfig cfg{0.9, 1, L, 0.3};
      const auto r = rate_upper_multi(cfg);
      const int t = 30;
      const GaussianSystem sys(cfg.rho, r.channel.sigma_z2, t);
      const auto received = packed_multi_burst_received(t, cfg.B, cfg.L, max_multi_burst_erasures(t, cfg.B, cfg.L));
      const auto p = ErasurePattern::multi_burst(t, received, cfg.B, cfg.L);
      CAPTURE(L);
      CHECK(gamma(sys, p) <= cfg.D + 1e-9);
    }
  }
  SUBCASE("eta with L = 1 is the D-noisy sample alone") {
    const GmConfig cfg{0.8, 1, 1, 0.4};
    CHECK(eta_multi(cfg, {0.5}) == doctest::Approx(cfg.D).epsilon(1e-12));
  }
}

TEST_CASE("high-resolution limit") {
  for (int B : {1, 2}) {
    double previous_gap = 1e9;
    for (double D : {1e-2, 1e-3, 1e-4, 1e-5}) {
      const GmConfig cfg{0.9, B, 4, D};
      const double hr = high_res_rate(cfg);
      const double gap = std::max(std::abs(lower_bound_single(cfg) - hr), std::abs(rate_upper_multi(cfg).rate - hr));
      CHECK(gap < previous_gap);
      previous_gap = gap;
    }
    CHECK(previous_gap < 0.01);
  }
  CHECK(high_res_rate({0.9, 1, 1, 0.9}) == 0.0);
}

TEST_CASE("naive Wyner-Ziv rate") {
  for (double rho : {0.5, 0.9})
    for (double D : {0.1, 0.3}) {
      const GmConfig cfg{rho, 1, 1, D};
      // independent: bisection on the 3x3 Gram of (s_t, u_{t-2}, u_t)
      const double c = rho * rho;
      auto gram = [&](double s) {
        return oracle::Table{{1.0, c, 1.0}, {c, 1.0 + s, c}, {1.0, c, 1.0 + s}};
      };
      double lo = std::log(1e-12), hi = std::log(1e12);
      for (int it = 0; it < 300; ++it) {
        const double mid = 0.5 * (lo + hi);
        (oracle::conditional_variance(gram(std::exp(mid)), 0, {1, 2}) < D ? lo : hi) = mid;
      }
      const double s = std::exp(0.5 * (lo + hi));
      const double expected = 0.5 * std::log2(oracle::conditional_variance(gram(s), 2, {1}) / s);
      CHECK(naive_wz_rate(cfg) == doctest::Approx(expected).epsilon(1e-8));
      CHECK(naive_wz_rate(cfg) >= rate_upper_single(cfg) - 1e-9);
    }
}

TEST_CASE("finite-horizon lower bound increases toward the steady state") {
  const GmConfig cfg{0.9, 2, 1, 0.2};
  double previous = 0.0;
  for (int t = 3; t <= 200; ++t) {
    const double r = finite_t_lower(cfg, t);
    CHECK(r >= previous - 1e-12);
    previous = r;
  }
  CHECK(previous == doctest::Approx(lower_bound_single(cfg)).epsilon(1e-8));
  CHECK_THROWS_AS(finite_t_lower(cfg, 2), ValidationError);
}

TEST_CASE("configuration validation and precision limits") {
  CHECK_THROWS_AS(lower_bound_single({1.0, 1, 1, 0.2}), ValidationError);
  CHECK_THROWS_AS(lower_bound_single({0.0, 1, 1, 0.2}), ValidationError);
  CHECK_THROWS_AS(lower_bound_single({0.9, -1, 1, 0.2}), ValidationError);
  CHECK_THROWS_AS(rate_upper_multi({0.9, 1, 0, 0.2}), ValidationError);
  CHECK_THROWS_AS(lower_bound_single({0.9, 1, 1, 0.0}), ValidationError);
  CHECK_THROWS_AS(solve_test_channel_single({0.9, 1, 1, 1e-14}), PrecisionError);
}

TEST_CASE("no burst reduces to predictive coding") {
  const GmConfig cfg{0.9, 0, 1, 0.2};
  const double predictive = 0.5 * std::log2((1.0 - 0.81 * (1.0 - 0.2)) / 0.2);
  CHECK(lower_bound_single(cfg) == doctest::Approx(predictive).epsilon(1e-10));
  CHECK(rate_upper_single(cfg) == doctest::Approx(predictive).epsilon(1e-8));
}

TEST_CASE("bundle of bounds") {
  const auto b = compute_gm_bounds({0.9, 1, 2, 0.2});
  REQUIRE(b.upper_multi.has_value());
  CHECK(b.lower <= b.upper_single);
  CHECK(b.upper_single <= *b.upper_multi + 1e-12);
  CHECK(b.sigma_z2_single > 0.0);
  CHECK_FALSE(compute_gm_bounds({0.9, 1, 2, 0.2}, false).upper_multi.has_value());
}
