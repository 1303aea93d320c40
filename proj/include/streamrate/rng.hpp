#pragma once

// Counter-based random streams for the Monte-Carlo harness.
//
// Generator: Philox4x32-10 (Salmon et al., "Parallel random numbers: as easy
// as 1, 2, 3", SC'11). A stream is addressed by (seed, stream id):
//   key     = (seed & 0xffffffff, seed >> 32)
//   counter = (block & 0xffffffff, block >> 32, stream & 0xffffffff, stream >> 32)
// where block counts the 128-bit outputs already drawn from the stream.
// Words are consumed in order w0, w1, w2, w3.
//   u64      = (w_a << 32) | w_b                   (two consecutive words)
//   uniform  = (u64 >> 11) * 2^-53                  in [0, 1)
//   open     = ((u64 >> 11) + 0.5) * 2^-53          in (0, 1)
//   normal   = Box-Muller on two open uniforms (r = sqrt(-2 ln u1),
//              theta = 2 pi u2); the cosine branch is returned first and the
//              sine branch is cached for the next call.
// Each Monte-Carlo trial owns the stream (seed, trial index), so results do
// not depend on thread count or scheduling.

#include <array>
#include <cstdint>

namespace streamrate {

using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

/// One application of the ten-round Philox4x32 bijection.
PhiloxCounter philox4x32_10(PhiloxCounter counter, PhiloxKey key);

class PhiloxStream {
 public:
  PhiloxStream(std::uint64_t seed, std::uint64_t stream);

  std::uint32_t next_u32();
  std::uint64_t next_u64();
  double uniform();
  double uniform_open();
  double normal();
  bool bernoulli(double p) { return uniform() < p; }

 private:
  void refill();

  PhiloxKey key_{};
  std::uint64_t stream_ = 0;
  std::uint64_t block_ = 0;
  PhiloxCounter buffer_{};
  int used_ = 4;
  bool has_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

}  // namespace streamrate
