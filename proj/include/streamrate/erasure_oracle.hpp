#pragma once

// Brute-force Gaussian conditioning over explicit erasure patterns at a finite
// horizon. The joint law of (s_{-1}, s_0..s_t, u_0..u_t) is materialized and
// every rate/distortion constraint is a Schur complement on it.

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace streamrate {

enum class PatternKind { single_burst, multi_burst, arbitrary };

/// Non-erased indices Omega within {0, ..., t-1} seen by a decoder at time t.
/// Time t itself is always received.
class ErasurePattern {
 public:
  /// One burst of length burst_len covering [t - burst_len - offset, t - offset - 1].
  static ErasurePattern single_burst(int t, int burst_len, int offset);
  /// Bursts of length <= B separated by >= L received packets.
  static ErasurePattern multi_burst(int t, std::vector<int> received, int B, int L);
  static ErasurePattern arbitrary(int t, std::vector<int> received);

  int t() const { return t_; }
  PatternKind kind() const { return kind_; }
  const std::vector<int>& received() const { return received_; }
  std::vector<int> erased() const;
  std::string describe() const;

 private:
  ErasurePattern(int t, std::vector<int> received, PatternKind kind);

  int t_ = 0;
  std::vector<int> received_;
  PatternKind kind_ = PatternKind::arbitrary;
};

/// True when every erased run in `erased` (indices in [0, t-1]) has length
/// <= B and consecutive runs are separated by at least L received slots.
bool is_feasible_multi_burst(int t, std::span<const int> erased, int B, int L);

/// Every feasible multi-burst erasure set up to time t-1, built run by run.
/// Each entry lists erased indices in increasing order; the empty set is included.
std::vector<std::vector<int>> enumerate_multi_burst_erasures(int t, int B, int L);

/// The received set with the given number of erasures packed as close to t
/// as the (B, L) constraint allows: bursts of B ending at t-1, each preceded by
/// a guard of L, the remainder as the oldest (shorter) burst. Empty when the
/// count cannot be placed.
std::vector<int> packed_multi_burst_received(int t, int B, int L, int erasures);

/// Largest erasure count placeable in [0, t-1].
int max_multi_burst_erasures(int t, int B, int L);

/// Joint covariance of (s_{-1}, s_0..s_t, u_0..u_t) with unit-variance
/// Gauss-Markov states and test channel u_i = s_i + z_i.
class GaussianSystem {
 public:
  GaussianSystem(double rho, double sigma_z2, int horizon);

  double rho() const { return rho_; }
  double sigma_z2() const { return sigma_z2_; }
  int horizon() const { return horizon_; }
  /// Variable index of s_i, i in [-1, horizon].
  int s(int i) const;
  /// Variable index of u_i, i in [0, horizon].
  int u(int i) const;
  const Eigen::MatrixXd& covariance() const { return cov_; }

 private:
  double rho_;
  double sigma_z2_;
  int horizon_;
  Eigen::MatrixXd cov_;
};

/// Var(target | given) by Schur complement. Uses a Cholesky factor of the
/// conditioning block, retrying with a 1e-12 diagonal ridge; throws
/// NumericalError (with a condition-number estimate) if that also fails.
double conditional_variance(const Eigen::MatrixXd& covariance, int target, std::span<const int> given);
double conditional_variance(const GaussianSystem& sys, int target, std::span<const int> given);

/// I(s_t; u_t | u_Omega, s_{-1}) in bits.
double lambda(const GaussianSystem& sys, const ErasurePattern& pattern);
/// Var(s_t | u_Omega, u_t, s_{-1}).
double gamma(const GaussianSystem& sys, const ErasurePattern& pattern);

/// Outcome of one family of inequalities "lhs <= rhs".
struct LemmaCheck {
  std::string property;
  bool asserted = true;  ///< informational checks do not affect the verdict
  long instances = 0;
  long violations = 0;
  double min_slack = std::numeric_limits<double>::infinity();
  std::string worst_instance;
};

struct WorstPattern {
  int t = 0;
  std::vector<int> omega_star;       ///< packed maximal-erasure received set
  std::vector<int> argmax_lambda;    ///< received set maximizing lambda_t
  std::vector<int> argmax_gamma;     ///< received set maximizing gamma_t
  long patterns = 0;
};

struct LemmaReport {
  std::string lemma;
  bool passed = true;
  std::vector<LemmaCheck> checks;
  std::vector<WorstPattern> worst_patterns;
  std::vector<std::string> notes;

  long instances() const;
  double min_slack() const;
  std::string to_json() const;
};

/// Worst-case single-burst ordering: offset, burst length, time monotonicity
/// and early-burst dominance, for lambda and gamma, over t <= t_max (<= 30).
LemmaReport verify_single_burst_lemma(double rho, double sigma_z2, int B, int t_max);

/// Exhaustive check over feasible multi-burst patterns for t <= t_max (<= 22):
/// packed placement maximizes for a fixed count, the maximal count maximizes
/// overall, and the worst case grows with t.
LemmaReport verify_multi_burst_lemma(double rho, double sigma_z2, int B, int L, int t_max);

/// Replacement inequalities on the single-burst grid (t <= 20, burst <= 3)
/// plus `samples` random index-dominating pairs (A, B) of size <= 6.
LemmaReport verify_exchange_inequalities(double rho, double sigma_z2, int samples, std::uint64_t seed);

}  // namespace streamrate
