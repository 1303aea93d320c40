#pragma once

// Exact entropy computations on finite-alphabet stationary Markov chains and
// the lossless rate-recovery bounds built from them. All values are in bits.

#include <string_view>

#include <Eigen/Dense>

namespace streamrate {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Stationary law of a row-stochastic matrix.
///
/// Power iteration (tolerance 1e-12 in L1, at most 1e6 sweeps), falling back
/// to the null space of (P^T - I) when the iteration stalls. Throws
/// ValidationError for a non-stochastic matrix and ConvergenceError when the
/// stationary law is not unique.
Vector stationary_distribution(const Matrix& transition);

/// Stationary first-order chain. Immutable once built.
class MarkovChain {
 public:
  static MarkovChain from_transition(const Matrix& transition);
  /// Reads {"alphabet_size": n, "transition": [[...], ...]}. Any stationary
  /// vector in the document is ignored; it is always recomputed.
  static MarkovChain from_json(std::string_view text);
  static MarkovChain from_json_file(const std::string& path);
  /// Binary chain that flips its state with probability q.
  static MarkovChain binary_symmetric(double flip_probability);

  int alphabet_size() const { return static_cast<int>(transition_.rows()); }
  const Matrix& transition() const { return transition_; }
  const Vector& stationary() const { return stationary_; }
  /// P^lag, lag >= 0.
  Matrix transition_power(int lag) const;

 private:
  MarkovChain(Matrix transition, Vector stationary)
      : transition_(std::move(transition)), stationary_(std::move(stationary)) {}

  Matrix transition_;
  Vector stationary_;
};

struct LosslessBounds {
  double upper = 0.0;
  double lower = 0.0;
  double predictive_rate = 0.0;  ///< H(s_1 | s_0)
  int B = 0;
  int W = 0;
};

/// Shannon entropy of a probability vector, with 0 log 0 = 0.
double entropy_bits(const Vector& p);

/// H(s_lag | s_0) = sum_a pi(a) H(row a of P^lag). Throws ValidationError for lag < 1.
double conditional_entropy_lag(const MarkovChain& chain, int lag);

/// H(s_{B+1}, ..., s_{B+W+1} | s_0), via the Markov chain rule.
double window_conditional_entropy(const MarkovChain& chain, int B, int W);

/// Upper and lower bounds on the lossless rate-recovery function for burst
/// length B and recovery window W.
LosslessBounds lossless_bounds(const MarkovChain& chain, int B, int W);

/// H(s_1 | s_0, s_2) + H(s_3 | s_0): the sum-rate of the two-decoder problem
/// that lower bounds R(B=1, W=1). Cross-checked against 2 R^-(1, 1).
double multiterminal_sum_rate(const MarkovChain& chain);

/// Detailed balance: |pi(a)P(a,b) - pi(b)P(b,a)| <= tol for all a, b.
bool is_symmetric(const MarkovChain& chain, double tol);

}  // namespace streamrate
