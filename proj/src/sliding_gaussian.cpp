#include "streamrate/sliding_gaussian.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <set>
#include <utility>

#include "streamrate/errors.hpp"

namespace streamrate {
namespace {

double half_log2_inv(double d) { return 0.5 * std::log2(1.0 / d); }

void require_geometry(int B, int W) {
  if (B < 0 || W < 0) throw ValidationError("B and W must be >= 0");
}

using Item = std::pair<int, int>;  // (source time, refinement layer)
using ItemSet = std::set<Item>;

/// M_{source, from} = {m_{source, from}, ..., m_{source, B}}.
void add_layers(ItemSet& out, int source, int from, int B) {
  for (int j = from; j <= B; ++j) out.emplace(source, j);
}

ItemSet packet_items(int i, int B) {
  ItemSet out;
  for (int j = 0; j <= B; ++j) add_layers(out, i - j, j, B);
  return out;
}

std::string item_list(const ItemSet& items) {
  std::string out;
  for (const auto& [s, j] : items) out += "m(" + std::to_string(s) + "," + std::to_string(j) + ")";
  return out;
}

}  // namespace

DistortionVector DistortionVector::make(std::vector<double> d) {
  if (d.empty()) throw ValidationError("distortion vector must be non-empty");
  for (std::size_t j = 0; j < d.size(); ++j) {
    if (!std::isfinite(d[j]) || !(d[j] > 0.0) || d[j] > 1.0)
      throw ValidationError("distortion d_" + std::to_string(j) + " must lie in (0, 1]");
    if (j > 0 && d[j] < d[j - 1]) throw ValidationError("distortion vector must be non-decreasing");
  }
  return DistortionVector(std::move(d));
}

DistortionVector reduce_window(const DistortionVector& d, int B, int W) {
  require_geometry(B, W);
  std::vector<double> out(d.values());
  out.resize(static_cast<std::size_t>(B + W + 1), 1.0);
  return DistortionVector::make(std::move(out));
}

double rate_recovery(const DistortionVector& d, int B, int W) {
  require_geometry(B, W);
  double sum = 0.0;
  for (int k = 1; k <= std::min(d.K() - W, B); ++k) sum += half_log2_inv(d[W + k]);
  return half_log2_inv(d[0]) + sum / (W + 1);
}

double LayerPlan::amortized_rate() const {
  double sum = 0.0;
  for (int k = 1; k <= B; ++k) sum += cum_rates[static_cast<std::size_t>(k)];
  return cum_rates.front() + sum / (W + 1);
}

double LayerPlan::unamortized_rate() const {
  double sum = 0.0;
  for (double r : cum_rates) sum += r;
  return sum;
}

LayerPlan layer_plan(const DistortionVector& d, int B, int W) {
  const DistortionVector e = reduce_window(d, B, W);
  LayerPlan plan;
  plan.B = B;
  plan.W = W;
  plan.effective_K = e.K();
  plan.tilde_rates.resize(static_cast<std::size_t>(B + 1));
  if (B == 0) {
    plan.tilde_rates[0] = half_log2_inv(e[0]);
  } else {
    plan.tilde_rates[0] = 0.5 * std::log2(e[W + 1] / e[0]);
    for (int j = 1; j < B; ++j) plan.tilde_rates[static_cast<std::size_t>(j)] = 0.5 * std::log2(e[W + j + 1] / e[W + j]);
    plan.tilde_rates[static_cast<std::size_t>(B)] = half_log2_inv(e[W + B]);
  }
  plan.cum_rates.assign(static_cast<std::size_t>(B + 1), 0.0);
  double acc = 0.0;
  for (int j = B; j >= 0; --j) {
    acc += plan.tilde_rates[static_cast<std::size_t>(j)];
    plan.cum_rates[static_cast<std::size_t>(j)] = acc;
  }
  return plan;
}

BaselineRates baseline_rates(const DistortionVector& d, int B, int W) {
  require_geometry(B, W);
  BaselineRates r;
  for (int k = 0; k <= d.K(); ++k) r.still_image += half_log2_inv(d[k]);
  for (int k = 0; k <= std::min(B, d.K()); ++k) r.wyner_ziv += half_log2_inv(d[k]);
  const double base = half_log2_inv(d[0]);
  r.predictive_fec = static_cast<double>(B + W + 1) / (W + 1) * base;
  r.gop = r.still_image / (W + 1) + static_cast<double>(W) / (W + 1) * base;
  return r;
}

DecodabilityReport simulate_layer_decoding(int B, int W, int K, const std::vector<bool>& erased) {
  require_geometry(B, W);
  if (K < 0) throw ValidationError("K must be >= 0");
  const int horizon = static_cast<int>(erased.size());

  // Error windows: each erased run [a, b] extended by W slots.
  std::vector<bool> in_window(erased.size(), false);
  for (int i = 0; i < horizon; ++i) {
    if (!erased[static_cast<std::size_t>(i)]) continue;
    for (int j = i; j <= std::min(horizon - 1, i + W); ++j) in_window[static_cast<std::size_t>(j)] = true;
  }

  DecodabilityReport report;
  report.modes.assign(erased.size(), DecodeMode::none);
  std::vector<bool> decoded(erased.size(), false);
  ItemSet known;

  auto fail = [&](int i, std::string why) {
    if (report.decodable) {
      report.decodable = false;
      report.first_failure = i;
      report.failure = std::move(why);
    }
  };

  // Distortion index held for source s: 0 with all layers, W+j with layers j..B, INT_MAX otherwise.
  auto held_index = [&](int s) {
    if (s < 0) return 0;
    for (int j = 0; j <= B; ++j) {
      bool all = true;
      for (int k = j; k <= B && all; ++k) all = known.count({s, k}) > 0;
      if (all) return j == 0 ? 0 : W + j;
    }
    return INT_MAX;
  };

  for (int i = 0; i < horizon; ++i) {
    if (!erased[static_cast<std::size_t>(i)]) {
      if (i == 0 || decoded[static_cast<std::size_t>(i - 1)]) {
        ItemSet fresh = packet_items(i, B);
        for (const auto& item : packet_items(i - 1, B)) fresh.erase(item);
        ItemSet expected;
        add_layers(expected, i, 0, B);
        if (fresh != expected)
          fail(i, "packet " + std::to_string(i) + " carries " + item_list(fresh) + " beyond its predecessor");
        known.insert(fresh.begin(), fresh.end());
        decoded[static_cast<std::size_t>(i)] = true;
        report.modes[static_cast<std::size_t>(i)] = DecodeMode::steady;
      } else if (i - W >= 0) {
        bool window_received = true;
        for (int j = i - W; j <= i; ++j) window_received = window_received && !erased[static_cast<std::size_t>(j)];
        if (window_received) {
          ItemSet joint;
          for (int j = i - W; j <= i; ++j) {
            const ItemSet c = packet_items(j, B);
            joint.insert(c.begin(), c.end());
          }
          ItemSet expected = packet_items(i - W, B);
          for (int j = i - W + 1; j <= i; ++j) add_layers(expected, j, 0, B);
          if (joint != expected) fail(i, "joint window ending at " + std::to_string(i) + " is not nested");
          known.insert(joint.begin(), joint.end());
          for (int j = i - W; j <= i; ++j) decoded[static_cast<std::size_t>(j)] = true;
          report.modes[static_cast<std::size_t>(i)] = DecodeMode::joint;
        }
      }
    }

    if (in_window[static_cast<std::size_t>(i)]) continue;
    for (int l = 0; l <= K; ++l) {
      ++report.requirements_checked;
      const int held = held_index(i - l);
      if (held > l) {
        fail(i, "time " + std::to_string(i) + ": source " + std::to_string(i - l) + " needs distortion index <= " +
                    std::to_string(l) + " but holds " + (held == INT_MAX ? std::string("nothing") : std::to_string(held)));
      }
    }
  }
  return report;
}

DecodabilityReport decodability_check(int B, int W, int K, int horizon, int burst_start, int burst_len) {
  require_geometry(B, W);
  if (K < 0) throw ValidationError("K must be >= 0");
  if (burst_len < 0 || burst_len > B) throw ValidationError("burst length must lie in [0, B]");
  if (burst_start < 0) throw ValidationError("burst start must be >= 0");
  if (horizon < burst_start + burst_len + W + K)
    throw ValidationError("horizon must cover the burst, the recovery window and K further steps");
  std::vector<bool> erased(static_cast<std::size_t>(horizon), false);
  for (int i = burst_start; i < burst_start + burst_len; ++i) erased[static_cast<std::size_t>(i)] = true;
  return simulate_layer_decoding(B, W, K, erased);
}

}  // namespace streamrate
