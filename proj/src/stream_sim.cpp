#include "streamrate/stream_sim.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "streamrate/erasure_oracle.hpp"
#include "streamrate/errors.hpp"
#include "streamrate/parallel.hpp"
#include "streamrate/rng.hpp"

namespace streamrate {
namespace {

constexpr long kBlock = 1024;
constexpr int kMaxHorizon = 10000;
constexpr int kMaxBlockLength = 16;
constexpr std::uint64_t kBinMapStream = ~std::uint64_t{0};

struct Moments {
  std::vector<double> sum;
  std::vector<double> sum_sq;
};

std::vector<bool> effective_schedule(const SimConfig& cfg) {
  return cfg.erased.empty() ? no_erasures(cfg.horizon) : cfg.erased;
}

}  // namespace

void SimConfig::validate() const {
  if (!(rho > 0.0 && rho < 1.0)) throw ValidationError("rho must lie in (0,1)");
  if (!(sigma_z2 > 0.0) || !std::isfinite(sigma_z2)) throw ValidationError("sigma_z2 must be positive and finite");
  if (horizon < 1 || horizon > kMaxHorizon) throw ValidationError("horizon must lie in [1, 10000]");
  if (trials < 1) throw ValidationError("trials must be >= 1");
  if (!erased.empty() && static_cast<int>(erased.size()) != horizon)
    throw ValidationError("erasure schedule length must equal the horizon");
}

std::vector<bool> no_erasures(int horizon) {
  if (horizon < 0) throw ValidationError("horizon must be >= 0");
  return std::vector<bool>(static_cast<std::size_t>(horizon), false);
}

std::vector<bool> single_burst_schedule(int horizon, int start, int length) {
  if (start < 0 || length < 0 || start + length > horizon) throw ValidationError("burst must fit inside the horizon");
  auto out = no_erasures(horizon);
  for (int i = start; i < start + length; ++i) out[static_cast<std::size_t>(i)] = true;
  return out;
}

std::vector<bool> periodic_burst_schedule(int horizon, int first_start, int B, int L) {
  if (first_start < 0 || B < 1 || L < 1) throw ValidationError("periodic bursts need first_start >= 0, B >= 1, L >= 1");
  auto out = no_erasures(horizon);
  for (int start = first_start; start < horizon; start += B + L)
    for (int i = start; i < std::min(start + B, horizon); ++i) out[static_cast<std::size_t>(i)] = true;
  return out;
}

std::vector<double> decoder_error_variance(double rho, double sigma_z2, const std::vector<bool>& erased) {
  std::vector<double> out(erased.size());
  double p = 0.0;
  const double innovation = 1.0 - rho * rho;
  for (std::size_t t = 0; t < erased.size(); ++t) {
    p = rho * rho * p + innovation;
    if (!erased[t]) p = p * sigma_z2 / (p + sigma_z2);
    out[t] = p;
  }
  return out;
}

MseTrace simulate_gm_stream(const SimConfig& cfg) {
  cfg.validate();
  const auto erased = effective_schedule(cfg);
  const auto T = static_cast<std::size_t>(cfg.horizon);
  const long blocks = (cfg.trials + kBlock - 1) / kBlock;
  const double innovation_sd = std::sqrt(1.0 - cfg.rho * cfg.rho);
  const double noise_sd = std::sqrt(cfg.sigma_z2);

  std::vector<Moments> partial(static_cast<std::size_t>(blocks));
  parallel_for(static_cast<std::size_t>(blocks), [&](std::size_t b) {
    Moments& m = partial[b];
    m.sum.assign(T, 0.0);
    m.sum_sq.assign(T, 0.0);
    const long first = static_cast<long>(b) * kBlock;
    const long last = std::min(cfg.trials, first + kBlock);
    for (long trial = first; trial < last; ++trial) {
      PhiloxStream rng(cfg.seed, static_cast<std::uint64_t>(trial));
      double s = rng.normal();
      double estimate = s;
      double p = 0.0;
      for (std::size_t t = 0; t < T; ++t) {
        s = cfg.rho * s + innovation_sd * rng.normal();
        const double u = s + noise_sd * rng.normal();
        estimate *= cfg.rho;
        p = cfg.rho * cfg.rho * p + 1.0 - cfg.rho * cfg.rho;
        if (!erased[t]) {
          const double gain = p / (p + cfg.sigma_z2);
          estimate += gain * (u - estimate);
          p *= 1.0 - gain;
        }
        const double e2 = (s - estimate) * (s - estimate);
        m.sum[t] += e2;
        m.sum_sq[t] += e2 * e2;
      }
    }
  });

  MseTrace trace;
  trace.trials = cfg.trials;
  trace.mean.assign(T, 0.0);
  trace.std_error.assign(T, 0.0);
  std::vector<double> sum_sq(T, 0.0);
  for (const auto& m : partial)
    for (std::size_t t = 0; t < T; ++t) {
      trace.mean[t] += m.sum[t];
      sum_sq[t] += m.sum_sq[t];
    }
  const auto n = static_cast<double>(cfg.trials);
  for (std::size_t t = 0; t < T; ++t) {
    trace.mean[t] /= n;
    const double var = cfg.trials > 1 ? std::max(0.0, (sum_sq[t] - n * trace.mean[t] * trace.mean[t]) / (n - 1.0)) : 0.0;
    trace.std_error[t] = std::sqrt(var / n);
  }
  trace.expected = decoder_error_variance(cfg.rho, cfg.sigma_z2, erased);
  return trace;
}

BurstPositionReport sweep_burst_position(const SimConfig& cfg, int B, int max_offset) {
  cfg.validate();
  const int t = cfg.horizon - 1;
  if (B < 0 || B > t) throw ValidationError("burst length must lie in [0, horizon - 1]");
  if (max_offset < 0) throw ValidationError("max_offset must be >= 0");
  const int offsets = std::min(max_offset, t - B);

  BurstPositionReport report;
  report.decode_time = t;
  report.B = B;
  const GaussianSystem sys(cfg.rho, cfg.sigma_z2, t);
  for (int k = 0; k <= offsets; ++k) {
    SimConfig run = cfg;
    run.erased = single_burst_schedule(cfg.horizon, t - B - k, B);
    const MseTrace trace = simulate_gm_stream(run);
    BurstPositionPoint point;
    point.offset = k;
    point.mse = trace.mean.back();
    point.std_error = trace.std_error.back();
    point.oracle = gamma(sys, ErasurePattern::single_burst(t, B, k));
    if (std::abs(point.mse - point.oracle) > 3.0 * point.std_error) report.within_three_sigma = false;
    report.points.push_back(point);
  }
  auto worst = [&](auto key) {
    return std::max_element(report.points.begin(), report.points.end(),
                            [&](const auto& a, const auto& b) { return key(a) < key(b); })
        ->offset;
  };
  report.empirical_worst_offset = worst([](const BurstPositionPoint& p) { return p.mse; });
  report.oracle_worst_offset = worst([](const BurstPositionPoint& p) { return p.oracle; });
  return report;
}

BinningResult simulate_binning(const BinningConfig& cfg) {
  if (cfg.n < 1 || cfg.n > kMaxBlockLength) throw ValidationError("block length must lie in [1, 16]");
  if (!(cfg.q >= 0.0 && cfg.q < 0.5)) throw ValidationError("flip probability must lie in [0, 0.5)");
  if (!(cfg.rate >= 0.0) || !std::isfinite(cfg.rate)) throw ValidationError("rate must be finite and >= 0");
  if (cfg.trials < 1) throw ValidationError("trials must be >= 1");
  const double bins_real = std::round(std::exp2(cfg.n * cfg.rate));
  if (bins_real < 1.0) throw ValidationError("rate gives fewer than one bin");
  if (bins_real > 1e12) throw ValidationError("rate gives too many bins");
  const auto bins = static_cast<std::uint64_t>(bins_real);

  const std::uint32_t sequences = 1u << cfg.n;
  std::vector<std::uint64_t> bin_of(sequences);
  PhiloxStream map_rng(cfg.seed, kBinMapStream);
  for (auto& b : bin_of) b = map_rng.next_u64() % bins;
  // Only occupied bins need storage; sort sequences by bin.
  std::vector<std::uint32_t> order(sequences);
  for (std::uint32_t x = 0; x < sequences; ++x) order[x] = x;
  std::stable_sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) { return bin_of[a] < bin_of[b]; });

  const long blocks = (cfg.trials + kBlock - 1) / kBlock;
  std::vector<long> errors(static_cast<std::size_t>(blocks), 0);
  parallel_for(static_cast<std::size_t>(blocks), [&](std::size_t b) {
    const long first = static_cast<long>(b) * kBlock;
    const long last = std::min(cfg.trials, first + kBlock);
    for (long trial = first; trial < last; ++trial) {
      PhiloxStream rng(cfg.seed, static_cast<std::uint64_t>(trial));
      const std::uint32_t prev = rng.next_u32() & (sequences - 1);
      std::uint32_t flips = 0;
      for (int i = 0; i < cfg.n; ++i)
        if (rng.bernoulli(cfg.q)) flips |= 1u << i;
      const std::uint32_t s = prev ^ flips;
      auto range = std::equal_range(order.begin(), order.end(), s,
                                    [&](std::uint32_t a, std::uint32_t c) { return bin_of[a] < bin_of[c]; });
      // order is stable within a bin, so candidates appear in increasing index
      std::uint32_t best = *range.first;
      int best_distance = std::popcount(best ^ prev);
      for (auto it = range.first; it != range.second; ++it) {
        const int d = std::popcount(*it ^ prev);
        if (d < best_distance) {
          best = *it;
          best_distance = d;
        }
      }
      if (best != s) ++errors[b];
    }
  });

  BinningResult result;
  result.trials = cfg.trials;
  result.bins = static_cast<long>(bins);
  for (long e : errors) result.errors += e;
  const double n = static_cast<double>(cfg.trials);
  const double p = static_cast<double>(result.errors) / n;
  result.error_rate = p;
  const double z = 1.959963984540054;
  const double denom = 1.0 + z * z / n;
  const double centre = (p + z * z / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z * z / (4.0 * n * n)) / denom;
  result.ci_low = std::max(0.0, centre - half);
  result.ci_high = std::min(1.0, centre + half);
  return result;
}

}  // namespace streamrate
