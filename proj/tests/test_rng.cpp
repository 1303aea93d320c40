#include <doctest.h>

#include <cmath>

#include "streamrate/rng.hpp"

using namespace streamrate;

TEST_CASE("Philox4x32-10 known-answer vectors") {
  CHECK(philox4x32_10({0, 0, 0, 0}, {0, 0}) == PhiloxCounter{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u});
  CHECK(philox4x32_10({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu}, {0xffffffffu, 0xffffffffu}) ==
        PhiloxCounter{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu});
  CHECK(philox4x32_10({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u}, {0xa4093822u, 0x299f31d0u}) ==
        PhiloxCounter{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u});
}

TEST_CASE("stream layout") {
  PhiloxStream s(0, 0);
  const auto block0 = philox4x32_10({0, 0, 0, 0}, {0, 0});
  const auto block1 = philox4x32_10({1, 0, 0, 0}, {0, 0});
  for (auto w : block0) CHECK(s.next_u32() == w);
  CHECK(s.next_u32() == block1[0]);

  PhiloxStream t(0x0000000500000007ull, 3);
  const auto first = philox4x32_10({0, 0, 3, 0}, {7, 5});
  CHECK(t.next_u64() == ((std::uint64_t{first[0]} << 32) | first[1]));
}

TEST_CASE("streams are reproducible and distinct") {
  PhiloxStream a(42, 1), b(42, 1), c(42, 2);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const double x = a.normal();
    CHECK(x == b.normal());
    differs = differs || x != c.normal();
  }
  CHECK(differs);
}

TEST_CASE("uniform and normal moments") {
  PhiloxStream s(9, 0);
  const int n = 200000;
  double sum = 0, sum_sq = 0, usum = 0, lo = 1, hi = 0;
  for (int i = 0; i < n; ++i) {
    const double z = s.normal();
    sum += z;
    sum_sq += z * z;
    const double u = s.uniform();
    usum += u;
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  CHECK(std::abs(sum / n) < 5.0 / std::sqrt(n));
  CHECK(std::abs(sum_sq / n - 1.0) < 5.0 * std::sqrt(2.0 / n));
  CHECK(std::abs(usum / n - 0.5) < 5.0 * std::sqrt(1.0 / 12.0 / n));
  CHECK(lo >= 0.0);
  CHECK(hi < 1.0);
  PhiloxStream o(9, 1);
  for (int i = 0; i < 1000; ++i) {
    const double u = o.uniform_open();
    CHECK(u > 0.0);
    CHECK(u < 1.0);
  }
}
