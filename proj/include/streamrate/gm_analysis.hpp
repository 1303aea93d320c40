#pragma once

// Lossy rate-recovery bounds for a unit-variance Gauss-Markov source
// s_i = rho s_{i-1} + n_i streamed over burst-erasure channels with
// immediate recovery (W = 0). Rates are in bits per source symbol.
//
// Steady-state quantities are evaluated in closed form; the finite-horizon
// oracle in erasure_oracle.hpp is the independent check.

#include <optional>

namespace streamrate {

struct GmConfig {
  double rho = 0.9;
  int B = 1;   ///< maximum burst length (0 means no erasure; used for limit checks)
  int L = 1;   ///< guard separation between bursts (multi-burst channel only)
  double D = 0.2;

  /// Throws ValidationError unless 0 < rho < 1, B >= 0, L >= 1 and D > 0.
  void validate() const;
};

/// Test channel u = s + z with z ~ N(0, sigma_z2).
struct TestChannel {
  double sigma_z2 = 1.0;
};

struct GmBounds {
  double lower = 0.0;
  double upper_single = 0.0;
  std::optional<double> upper_multi;
  double high_res = 0.0;
  double naive_wz = 0.0;
  double sigma_z2_single = 0.0;
  std::optional<double> sigma_z2_multi;
};

/// Lower bound on the single-burst rate-recovery function. The closed form is
/// cross-checked against a bisection root of D y^2 - (D rho^2 + 1 - rho^{2(B+1)}) y
/// + rho^2 (1 - rho^{2B}) = 0 in y = 2^{2R}; disagreement beyond 1e-10 throws
/// InternalError. D >= 1 gives 0.
double lower_bound_single(const GmConfig& cfg);

/// Steady-state one-step prediction error of s_t from u_0..u_{t-1}.
double kalman_steady_sigma(double rho, double sigma_z2);

/// Steady-state MMSE of s_t given u_0..u_{t-B-1} and u_t.
double gamma_single(const GmConfig& cfg, TestChannel tc);

/// Noise level with gamma_single == D (|residual| <= 1e-10). Bisection over
/// [1e-12, 1e12] in log scale. Throws ValidationError for D >= 1 and
/// PrecisionError when D is below the distortion reachable at 1e-12.
TestChannel solve_test_channel_single(const GmConfig& cfg);

/// Achievable rate for a single burst: 1/2 log2((1 - rho^{2B}(1 - Sigma)) / D).
double rate_upper_single(const GmConfig& cfg);

/// MMSE of s_{t-B-1} from the D-noisy sample of s_{t-L-B} and the L-1 test
/// channel outputs that follow it.
double eta_multi(const GmConfig& cfg, TestChannel tc);

/// Distortion of the multi-burst scheme at noise level tc (the bisection target).
double gamma_multi(const GmConfig& cfg, TestChannel tc);

struct MultiBurstRate {
  double rate = 0.0;
  TestChannel channel;
};

/// Achievable rate for bursts of length <= B separated by >= L packets.
/// Monotonicity of the bisection target is verified on every call.
MultiBurstRate rate_upper_multi(const GmConfig& cfg);

/// 1/2 log2((1 - rho^{2(B+1)}) / D), floored at 0.
double high_res_rate(const GmConfig& cfg);

/// I(s_t; u_t | u_{t-B-1}) with the noise chosen so that the MMSE of s_t from
/// {u_{t-B-1}, u_t} equals D.
double naive_wz_rate(const GmConfig& cfg);

/// Finite-horizon lower bound at decode time t >= B+1: the smallest R >= 0
/// meeting the recursion-derived constraint. Increases with t toward
/// lower_bound_single.
double finite_t_lower(const GmConfig& cfg, int t);

/// All bounds for one configuration; the multi-burst entries are filled when
/// include_multi is set.
GmBounds compute_gm_bounds(const GmConfig& cfg, bool include_multi = true);

}  // namespace streamrate
