#pragma once

// Rate-recovery for i.i.d. unit-variance Gaussian sources when the decoder at
// time i must reproduce the K+1 most recent sources s_i, ..., s_{i-K} within
// distortions d_0 <= ... <= d_K. Includes the successive-refinement layer
// plan, a symbolic decodability checker for the layer-rearranged packets,
// and four baseline schemes.

#include <string>
#include <vector>

namespace streamrate {

class DistortionVector {
 public:
  /// Throws ValidationError unless 0 < d_0 <= d_1 <= ... <= d_K <= 1.
  static DistortionVector make(std::vector<double> d);

  int K() const { return static_cast<int>(d_.size()) - 1; }
  double operator[](int j) const { return d_[static_cast<std::size_t>(j)]; }
  const std::vector<double>& values() const { return d_; }

 private:
  explicit DistortionVector(std::vector<double> d) : d_(std::move(d)) {}
  std::vector<double> d_;
};

/// Effective vector of length B+W+1: padded with 1 (zero-rate layers) or
/// truncated.
DistortionVector reduce_window(const DistortionVector& d, int B, int W);

/// 1/2 log2(1/d_0) + 1/(W+1) sum_{k=1}^{min(K-W, B)} 1/2 log2(1/d_{W+k}).
double rate_recovery(const DistortionVector& d, int B, int W);

struct LayerPlan {
  std::vector<double> tilde_rates;  ///< refinement layer rates, index 0..B
  std::vector<double> cum_rates;    ///< R_j = sum_{k >= j} tilde_rates[k]
  int B = 0;
  int W = 0;
  int effective_K = 0;

  /// R_0 + 1/(W+1) sum_{k=1}^B R_k: the per-packet rate after binning.
  double amortized_rate() const;
  /// sum_{k=0}^B R_k: the raw size of one rearranged packet.
  double unamortized_rate() const;
};

/// Layer j of source i (j = B coarsest) refines s_i so that layers j..B reach
/// d_{W+j} (j >= 1) or d_0 (j = 0). Computed on reduce_window(d, B, W).
LayerPlan layer_plan(const DistortionVector& d, int B, int W);

struct BaselineRates {
  double still_image = 0.0;
  double wyner_ziv = 0.0;
  double predictive_fec = 0.0;
  double gop = 0.0;  ///< sync frame every W+1 packets
};

BaselineRates baseline_rates(const DistortionVector& d, int B, int W);

enum class DecodeMode { none = 0, steady = 1, joint = 2 };

struct DecodabilityReport {
  bool decodable = true;
  int first_failure = -1;  ///< decode time of the first unmet requirement
  std::string failure;
  int requirements_checked = 0;
  std::vector<DecodeMode> modes;  ///< how c_i was recovered, per time
};

/// Symbolic decoding of the rearranged packets c_i = (M_{i,0}, M_{i-1,1}, ...,
/// M_{i-B,B}), M_{i,j} = {m_{i,j}, ..., m_{i,B}}, over an arbitrary erasure
/// vector. c_i is recovered from c_{i-1} and packet i, or jointly with
/// c_{i-W}, ..., c_{i-1} when packets i-W..i all arrive. Outside every
/// error window (erased run plus W slots) each s_{i-l}, l <= K, must be
/// held at a distortion index <= l.
DecodabilityReport simulate_layer_decoding(int B, int W, int K, const std::vector<bool>& erased);

/// One burst of burst_len <= B erasures starting at burst_start, simulated
/// over [0, horizon). Requires horizon >= burst_start + burst_len + W + K.
DecodabilityReport decodability_check(int B, int W, int K, int horizon, int burst_start, int burst_len);

}  // namespace streamrate
