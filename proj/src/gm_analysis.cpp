#include "streamrate/gm_analysis.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "streamrate/errors.hpp"

namespace streamrate {
namespace {

constexpr double kSigmaLo = 1e-12;
constexpr double kSigmaHi = 1e12;
constexpr double kResidualTol = 1e-10;
constexpr int kMonotoneProbes = 48;

double half_log2(double x) { return 0.5 * std::log2(x); }

/// Inverts a continuous increasing map sigma_z2 -> distortion over the
/// standard bracket, bisecting on log(sigma_z2).
TestChannel solve_increasing(const std::function<double(double)>& distortion, double target, const char* what) {
  const double at_lo = distortion(kSigmaLo);
  const double at_hi = distortion(kSigmaHi);
  if (target < at_lo)
    throw PrecisionError(std::string(what) + ": distortion " + std::to_string(target) +
                         " is below the value reachable at sigma_z2 = 1e-12 (" + std::to_string(at_lo) + ")");
  if (target > at_hi)
    throw InfeasibleError(std::string(what) + ": no test channel in [1e-12, 1e12] meets distortion " +
                          std::to_string(target));

  double lo = std::log(kSigmaLo);
  double hi = std::log(kSigmaHi);
  for (int it = 0; it < 400 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++it) {
    const double mid = 0.5 * (lo + hi);
    if (distortion(std::exp(mid)) < target)
      lo = mid;
    else
      hi = mid;
  }
  const double s_lo = std::exp(lo);
  const double s_hi = std::exp(hi);
  const double r_lo = std::abs(distortion(s_lo) - target);
  const double r_hi = std::abs(distortion(s_hi) - target);
  const double best = r_lo <= r_hi ? s_lo : s_hi;
  const double residual = std::min(r_lo, r_hi);
  if (residual > kResidualTol)
    throw NumericalError(std::string(what) + ": bisection residual " + std::to_string(residual) +
                         " exceeds tolerance");
  return TestChannel{best};
}

void require_lossy_target(const GmConfig& cfg, const char* what) {
  if (cfg.D >= 1.0) throw ValidationError(std::string(what) + " requires D < 1");
}

/// Predicted variance of s_{t} from the MMSE estimate of s_{t-lag} with error e:
/// 1 - rho^{2 lag}(1 - e).
double propagate(double rho, int lag, double error) { return 1.0 - std::pow(rho, 2 * lag) * (1.0 - error); }

/// Harmonic combination [1/a + 1/b]^{-1} written to stay finite for huge a.
double combine(double a, double b) { return a * b / (a + b); }

}  // namespace

void GmConfig::validate() const {
  if (!(rho > 0.0 && rho < 1.0)) throw ValidationError("rho must lie in (0,1)");
  if (B < 0) throw ValidationError("B must be >= 0");
  if (L < 1) throw ValidationError("L must be >= 1");
  if (!(D > 0.0) || !std::isfinite(D)) throw ValidationError("D must be positive");
}

double lower_bound_single(const GmConfig& cfg) {
  cfg.validate();
  if (cfg.D >= 1.0) return 0.0;
  const double r2 = cfg.rho * cfg.rho;
  const double tail = std::pow(cfg.rho, 2 * (cfg.B + 1));
  const double linear = cfg.D * r2 + 1.0 - tail;
  const double constant = r2 * (1.0 - std::pow(cfg.rho, 2 * cfg.B));
  const double delta = linear * linear - 4.0 * cfg.D * constant;
  if (delta < 0.0) throw InternalError("negative discriminant in lower bound");
  const double closed = half_log2((linear + std::sqrt(delta)) / (2.0 * cfg.D));

  // Larger root of the quadratic: q(1) = (D-1)(1-rho^2) < 0 and q grows past b/D + 1.
  auto quadratic = [&](double y) { return cfg.D * y * y - linear * y + constant; };
  double lo = 1.0;
  double hi = linear / cfg.D + 1.0;
  for (int it = 0; it < 2000 && hi - lo > 4 * std::numeric_limits<double>::epsilon() * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (quadratic(mid) < 0.0 ? lo : hi) = mid;
  }
  const double root = half_log2(0.5 * (lo + hi));
  if (std::abs(root - closed) > 1e-10)
    throw InternalError("lower bound closed form and quadratic root disagree");
  return closed;
}

double kalman_steady_sigma(double rho, double sigma_z2) {
  if (!(rho > 0.0 && rho < 1.0)) throw ValidationError("rho must lie in (0,1)");
  if (!(sigma_z2 >= 0.0)) throw ValidationError("sigma_z2 must be >= 0");
  const double a = 1.0 - rho * rho;
  const double root = std::sqrt(a * a * (1.0 - sigma_z2) * (1.0 - sigma_z2) + 4.0 * sigma_z2 * a);
  if (sigma_z2 <= 1.0) return 0.5 * root + 0.5 * a * (1.0 - sigma_z2);
  // Rationalized branch; the direct form cancels catastrophically for large noise.
  return 2.0 * sigma_z2 * a / (root + a * (sigma_z2 - 1.0));
}

double gamma_single(const GmConfig& cfg, TestChannel tc) {
  cfg.validate();
  const double prior = propagate(cfg.rho, cfg.B, kalman_steady_sigma(cfg.rho, tc.sigma_z2));
  return combine(tc.sigma_z2, prior);
}

TestChannel solve_test_channel_single(const GmConfig& cfg) {
  cfg.validate();
  require_lossy_target(cfg, "solve_test_channel_single");
  return solve_increasing([&](double s) { return gamma_single(cfg, TestChannel{s}); }, cfg.D,
                          "solve_test_channel_single");
}

double rate_upper_single(const GmConfig& cfg) {
  cfg.validate();
  if (cfg.D >= 1.0) return 0.0;
  const TestChannel tc = solve_test_channel_single(cfg);
  const double prior = propagate(cfg.rho, cfg.B, kalman_steady_sigma(cfg.rho, tc.sigma_z2));
  return half_log2(prior / cfg.D);
}

double eta_multi(const GmConfig& cfg, TestChannel tc) {
  cfg.validate();
  require_lossy_target(cfg, "eta_multi");
  const int n = cfg.L;
  Eigen::VectorXd cross(n);
  Eigen::MatrixXd gram(n, n);
  for (int i = 0; i < n; ++i) {
    cross(i) = std::pow(cfg.rho, i);
    for (int j = 0; j < n; ++j) gram(i, j) = std::pow(cfg.rho, std::abs(i - j));
    gram(i, i) = 1.0 + tc.sigma_z2;
  }
  gram(n - 1, n - 1) = 1.0 + cfg.D / (1.0 - cfg.D);

  Eigen::LLT<Eigen::MatrixXd> llt(gram);
  if (llt.info() != Eigen::Success) throw InternalError("eta_multi: observation Gram matrix is not positive definite");
  return 1.0 - cross.dot(llt.solve(cross));
}

double gamma_multi(const GmConfig& cfg, TestChannel tc) {
  const double prior = propagate(cfg.rho, cfg.B + 1, eta_multi(cfg, tc));
  return combine(tc.sigma_z2, prior);
}

MultiBurstRate rate_upper_multi(const GmConfig& cfg) {
  cfg.validate();
  if (cfg.D >= 1.0) return {0.0, TestChannel{std::numeric_limits<double>::infinity()}};

  auto target = [&](double s) { return gamma_multi(cfg, TestChannel{s}); };
  double previous = target(kSigmaLo);
  for (int k = 1; k <= kMonotoneProbes; ++k) {
    const double s = std::exp(std::log(kSigmaLo) + (std::log(kSigmaHi) - std::log(kSigmaLo)) * k / kMonotoneProbes);
    const double current = target(s);
    if (current < previous - 1e-14)
      throw NumericalError("rate_upper_multi: distortion is not monotone in sigma_z2 at " + std::to_string(s));
    previous = current;
  }

  const TestChannel tc = solve_increasing(target, cfg.D, "rate_upper_multi");
  const double prior = propagate(cfg.rho, cfg.B + 1, eta_multi(cfg, tc));
  return {half_log2(prior / cfg.D), tc};
}

double high_res_rate(const GmConfig& cfg) {
  cfg.validate();
  return std::max(0.0, half_log2((1.0 - std::pow(cfg.rho, 2 * (cfg.B + 1))) / cfg.D));
}

double naive_wz_rate(const GmConfig& cfg) {
  cfg.validate();
  if (cfg.D >= 1.0) return 0.0;
  const double c = std::pow(cfg.rho, cfg.B + 1);
  // Var(s_t | u_{t-B-1}, u_t) for the 2x2 Gram [[1+s, c], [c, 1+s]] and cross (c, 1).
  auto distortion = [c](double s) {
    const double v = 1.0 + s;
    const double det = v * v - c * c;
    return 1.0 - (v * (1.0 + c * c) - 2.0 * c * c) / det;
  };
  const TestChannel tc = solve_increasing(distortion, cfg.D, "naive_wz_rate");
  const double s = tc.sigma_z2;
  const double innovation = 1.0 + s - c * c / (1.0 + s);  // Var(u_t | u_{t-B-1})
  return half_log2(innovation / s);
}

double finite_t_lower(const GmConfig& cfg, int t) {
  cfg.validate();
  if (t < cfg.B + 1) throw ValidationError("finite_t_lower requires t >= B+1");
  if (cfg.D >= 1.0) return 0.0;
  const double r2 = cfg.rho * cfg.rho;
  const double tail = std::pow(cfg.rho, 2 * (cfg.B + 1));
  const int steps = t - cfg.B - 1;

  auto bound = [&](double rate) {
    const double y = std::exp2(2.0 * rate);
    const double memory = tail * (1.0 - r2) / (cfg.D * (y - r2)) * (1.0 - std::pow(r2 / y, steps));
    return half_log2(memory + (1.0 - tail) / cfg.D);
  };
  // bound() decreases in the rate, so rate - bound(rate) is strictly increasing.
  if (bound(0.0) <= 0.0) return 0.0;
  double lo = 0.0;
  double hi = bound(0.0);
  constexpr int kMaxIterations = 100'000;
  int it = 0;
  for (; it < kMaxIterations && hi - lo > 1e-15; ++it) {
    const double mid = 0.5 * (lo + hi);
    (mid - bound(mid) < 0.0 ? lo : hi) = mid;
  }
  if (it == kMaxIterations) throw ConvergenceError("finite_t_lower did not converge");
  return hi;
}

GmBounds compute_gm_bounds(const GmConfig& cfg, bool include_multi) {
  cfg.validate();
  GmBounds out;
  out.lower = lower_bound_single(cfg);
  out.upper_single = rate_upper_single(cfg);
  out.high_res = high_res_rate(cfg);
  out.naive_wz = naive_wz_rate(cfg);
  out.sigma_z2_single =
      cfg.D >= 1.0 ? std::numeric_limits<double>::infinity() : solve_test_channel_single(cfg).sigma_z2;
  if (include_multi) {
    const MultiBurstRate multi = rate_upper_multi(cfg);
    out.upper_multi = multi.rate;
    out.sigma_z2_multi = multi.channel.sigma_z2;
  }
  return out;
}

}  // namespace streamrate
