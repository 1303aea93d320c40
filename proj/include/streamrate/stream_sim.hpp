#pragma once

// Monte-Carlo harness: Gauss-Markov streaming through the test channel with an
// erasure-aware MMSE decoder, and a small-block random-binning experiment for
// binary symmetric Markov sources.
//
// Every trial draws from its own Philox stream (seed, trial index) and trials
// are summed in fixed blocks of 1024 in block order, so outputs are
// bit-identical for a given seed regardless of thread count.

#include <cstdint>
#include <vector>

namespace streamrate {

struct SimConfig {
  double rho = 0.9;
  double sigma_z2 = 0.1;
  int horizon = 200;  ///< number of decode times 0..horizon-1, at most 10^4
  long trials = 1000;
  std::uint64_t seed = 1;
  std::vector<bool> erased;  ///< per time; empty means no erasures

  /// Throws ValidationError on out-of-range parameters.
  void validate() const;
};

std::vector<bool> no_erasures(int horizon);
/// Erases [start, start + length - 1].
std::vector<bool> single_burst_schedule(int horizon, int start, int length);
/// Bursts of length B starting at first_start, each followed by L received slots.
std::vector<bool> periodic_burst_schedule(int horizon, int first_start, int B, int L);

struct MseTrace {
  std::vector<double> mean;       ///< empirical E[(s_t - shat_t)^2]
  std::vector<double> std_error;  ///< standard error of the mean
  std::vector<double> expected;   ///< exact error variance of the decoder
  long trials = 0;
};

/// Sources s_t = rho s_{t-1} + sqrt(1 - rho^2) n_t with s_{-1} known to the
/// decoder; u_t = s_t + z_t is delivered unless erased. The decoder is the
/// Kalman filter that skips erased measurements, i.e. the exact conditional
/// mean of s_t given s_{-1} and the received u's up to t.
MseTrace simulate_gm_stream(const SimConfig& cfg);

/// Error variance of that decoder at every t (Riccati recursion with skips).
std::vector<double> decoder_error_variance(double rho, double sigma_z2, const std::vector<bool>& erased);

struct BurstPositionPoint {
  int offset = 0;  ///< burst covers [t - B - offset, t - offset - 1]
  double mse = 0.0;
  double std_error = 0.0;
  double oracle = 0.0;  ///< exact gamma from the erasure oracle
};

struct BurstPositionReport {
  int decode_time = 0;
  int B = 0;
  std::vector<BurstPositionPoint> points;
  int empirical_worst_offset = 0;
  int oracle_worst_offset = 0;
  bool within_three_sigma = true;  ///< every point within 3 standard errors of its oracle value
};

/// MSE at decode time cfg.horizon - 1 as a function of the burst offset,
/// for offsets 0..max_offset (clipped to t - B). cfg.erased is ignored.
BurstPositionReport sweep_burst_position(const SimConfig& cfg, int B, int max_offset);

struct BinningConfig {
  int n = 8;          ///< block length, at most 16
  double q = 0.1;     ///< flip probability, in [0, 0.5)
  double rate = 0.8;  ///< bits per symbol
  long trials = 10000;
  std::uint64_t seed = 1;
};

struct BinningResult {
  long errors = 0;
  long trials = 0;
  long bins = 0;
  double error_rate = 0.0;
  double ci_low = 0.0;   ///< 95% Wilson interval
  double ci_high = 0.0;
};

/// Steady-state Slepian-Wolf decoding of s = s_prev xor Bern(q)^n. Each of
/// the 2^n sequences gets a uniform bin among round(2^{n R}) from a
/// seed-derived map; the decoder knows s_prev and picks the sequence in the
/// announced bin closest in Hamming distance (ties to the smaller index).
/// Throws ValidationError when the rate yields fewer than one bin.
BinningResult simulate_binning(const BinningConfig& cfg);

}  // namespace streamrate
