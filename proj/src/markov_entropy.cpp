#include "streamrate/markov_entropy.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "streamrate/errors.hpp"

namespace streamrate {
namespace {

constexpr double kRowSumTol = 1e-12;
constexpr double kPowerTol = 1e-12;
constexpr long kPowerIterations = 1'000'000;
constexpr double kStationaryResidualTol = 1e-10;

void validate_stochastic(const Matrix& p) {
  if (p.rows() == 0 || p.rows() != p.cols())
    throw ValidationError("transition matrix must be square and non-empty");
  for (Eigen::Index a = 0; a < p.rows(); ++a) {
    double sum = 0.0;
    for (Eigen::Index b = 0; b < p.cols(); ++b) {
      const double v = p(a, b);
      if (!std::isfinite(v) || v < 0.0 || v > 1.0)
        throw ValidationError("transition entry (" + std::to_string(a) + "," + std::to_string(b) +
                              ") outside [0,1]");
      sum += v;
    }
    if (std::abs(sum - 1.0) > kRowSumTol)
      throw ValidationError("row " + std::to_string(a) + " sums to " + std::to_string(sum) + ", not 1");
  }
}

Vector normalized(Vector v) {
  for (auto& x : v)
    if (x < 0.0) x = 0.0;
  return v / v.sum();
}

Matrix matrix_power(const Matrix& p, int exponent) {
  Matrix result = Matrix::Identity(p.rows(), p.cols());
  Matrix base = p;
  for (unsigned e = static_cast<unsigned>(exponent); e != 0; e >>= 1) {
    if (e & 1u) result = result * base;
    base = base * base;
  }
  return result;
}

}  // namespace

Vector stationary_distribution(const Matrix& transition) {
  validate_stochastic(transition);
  const auto n = transition.rows();
  const Matrix balance = transition.transpose() - Matrix::Identity(n, n);

  Eigen::FullPivLU<Matrix> lu(balance);
  lu.setThreshold(1e-10);
  if (n - lu.rank() != 1)
    throw ConvergenceError("stationary distribution is not unique (chain is reducible; null space dimension " +
                           std::to_string(n - lu.rank()) + ")");

  Vector pi = Vector::Constant(n, 1.0 / static_cast<double>(n));
  for (long it = 0; it < kPowerIterations; ++it) {
    Vector next = transition.transpose() * pi;
    const double delta = (next - pi).lpNorm<1>();
    pi = std::move(next);
    if (delta <= kPowerTol) return normalized(pi);
  }

  // Power iteration stalled (periodic chain); solve the balance equations
  // with the normalization replacing one redundant row.
  Matrix system = balance;
  system.row(n - 1).setOnes();
  Vector rhs = Vector::Zero(n);
  rhs(n - 1) = 1.0;
  pi = normalized(system.fullPivLu().solve(rhs));
  if ((transition.transpose() * pi - pi).lpNorm<Eigen::Infinity>() > kStationaryResidualTol)
    throw ConvergenceError("stationary distribution did not converge");
  return pi;
}

MarkovChain MarkovChain::from_transition(const Matrix& transition) {
  Vector pi = stationary_distribution(transition);
  return MarkovChain(transition, std::move(pi));
}

MarkovChain MarkovChain::from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(std::string("chain JSON: ") + e.what());
  }
  if (!doc.contains("transition") || !doc["transition"].is_array())
    throw ValidationError("chain JSON: missing \"transition\" array");
  const auto& rows = doc["transition"];
  const auto n = static_cast<Eigen::Index>(rows.size());
  if (doc.contains("alphabet_size") &&
      (!doc["alphabet_size"].is_number_integer() || doc["alphabet_size"].get<long>() != n))
    throw ValidationError("chain JSON: alphabet_size does not match transition rows");
  Matrix p(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    const auto& row = rows[static_cast<std::size_t>(a)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != n)
      throw ValidationError("chain JSON: transition must be square");
    for (Eigen::Index b = 0; b < n; ++b) {
      if (!row[static_cast<std::size_t>(b)].is_number())
        throw ValidationError("chain JSON: non-numeric transition entry");
      p(a, b) = row[static_cast<std::size_t>(b)].get<double>();
    }
  }
  return from_transition(p);
}

MarkovChain MarkovChain::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open chain file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return from_json(buffer.str());
}

MarkovChain MarkovChain::binary_symmetric(double flip_probability) {
  if (!(flip_probability >= 0.0 && flip_probability <= 1.0))
    throw ValidationError("flip probability must lie in [0,1]");
  Matrix p(2, 2);
  p << 1.0 - flip_probability, flip_probability, flip_probability, 1.0 - flip_probability;
  Vector pi(2);
  pi << 0.5, 0.5;
  validate_stochastic(p);
  return MarkovChain(p, pi);
}

Matrix MarkovChain::transition_power(int lag) const {
  if (lag < 0) throw ValidationError("negative matrix power");
  return matrix_power(transition_, lag);
}

double entropy_bits(const Vector& p) {
  double h = 0.0;
  for (double x : p)
    if (x > 0.0) h -= x * std::log2(x);
  return h;
}

double conditional_entropy_lag(const MarkovChain& chain, int lag) {
  if (lag < 1) throw ValidationError("conditional_entropy_lag: lag must be >= 1");
  const Matrix pk = chain.transition_power(lag);
  double h = 0.0;
  for (Eigen::Index a = 0; a < pk.rows(); ++a) h += chain.stationary()(a) * entropy_bits(pk.row(a).transpose());
  return h;
}

double window_conditional_entropy(const MarkovChain& chain, int B, int W) {
  if (B < 0 || W < 0) throw ValidationError("B and W must be non-negative");
  return conditional_entropy_lag(chain, B + 1) + W * conditional_entropy_lag(chain, 1);
}

LosslessBounds lossless_bounds(const MarkovChain& chain, int B, int W) {
  if (B < 0 || W < 0) throw ValidationError("B and W must be non-negative");
  const double h1 = conditional_entropy_lag(chain, 1);
  const double window = static_cast<double>(W + 1);

  // I(s_B; s_{B+1} | s_0) = H(s_{B+1}|s_0) - H(s_1|s_0)
  // I(s_B; s_{B+W+1} | s_0) = H(s_{B+W+1}|s_0) - H(s_{W+1}|s_0)
  double mi_upper = 0.0;
  double mi_lower = 0.0;
  if (B > 0) {
    mi_upper = conditional_entropy_lag(chain, B + 1) - h1;
    mi_lower = conditional_entropy_lag(chain, B + W + 1) - conditional_entropy_lag(chain, W + 1);
  }

  LosslessBounds bounds;
  bounds.B = B;
  bounds.W = W;
  bounds.predictive_rate = h1;
  bounds.upper = h1 + mi_upper / window;
  bounds.lower = h1 + mi_lower / window;

  const double slepian_wolf = window_conditional_entropy(chain, B, W) / window;
  if (std::abs(slepian_wolf - bounds.upper) > 1e-10)
    throw InternalError("upper bound disagrees with the joint conditional entropy form");
  return bounds;
}

double multiterminal_sum_rate(const MarkovChain& chain) {
  const Matrix& p = chain.transition();
  const Matrix p2 = chain.transition_power(2);
  const Vector& pi = chain.stationary();
  const auto n = p.rows();

  // H(s_1 | s_0, s_2) from the joint law of (s_0, s_1, s_2).
  double h_middle = 0.0;
  for (Eigen::Index a = 0; a < n; ++a)
    for (Eigen::Index b = 0; b < n; ++b)
      for (Eigen::Index c = 0; c < n; ++c) {
        const double joint = pi(a) * p(a, b) * p(b, c);
        if (joint > 0.0) h_middle -= joint * std::log2(joint / (pi(a) * p2(a, c)));
      }
  const double sum_rate = h_middle + conditional_entropy_lag(chain, 3);

  const double twice_lower = 2.0 * lossless_bounds(chain, 1, 1).lower;
  if (std::abs(sum_rate - twice_lower) > 1e-10)
    throw InternalError("multi-terminal sum rate disagrees with 2 R^-(1,1)");
  return sum_rate;
}

bool is_symmetric(const MarkovChain& chain, double tol) {
  if (!(tol > 0.0)) throw ValidationError("tolerance must be positive");
  const Matrix& p = chain.transition();
  const Vector& pi = chain.stationary();
  for (Eigen::Index a = 0; a < p.rows(); ++a)
    for (Eigen::Index b = a + 1; b < p.cols(); ++b)
      if (std::abs(pi(a) * p(a, b) - pi(b) * p(b, a)) > tol) return false;
  return true;
}

}  // namespace streamrate
