#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <utility>

namespace dmimo {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11). Any draw is a
// pure function of (seed, counter), so frames can be generated independently
// and in any order.
struct Philox4x32 {
  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

  static std::array<std::uint32_t, 4> block(std::array<std::uint32_t, 4> ctr,
                                            std::array<std::uint32_t, 2> key) {
    for (int round = 0; round < 10; ++round) {
      const std::uint64_t p0 = std::uint64_t(kMul0) * ctr[0];
      const std::uint64_t p1 = std::uint64_t(kMul1) * ctr[2];
      const auto hi0 = std::uint32_t(p0 >> 32), lo0 = std::uint32_t(p0);
      const auto hi1 = std::uint32_t(p1 >> 32), lo1 = std::uint32_t(p1);
      ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
      key[0] += kWeyl0;
      key[1] += kWeyl1;
    }
    return ctr;
  }
};

// Counter word 3 carries the stream id so unrelated consumers (channel draws,
// random subset picks, test helpers) never collide.
enum RngStream : std::uint32_t {
  kStreamChannel = 0,
  kStreamSubset = 1,
  kStreamTest = 0xFFFF0000u,
};

inline std::array<std::uint32_t, 2> rng_key(std::uint64_t seed) {
  return {std::uint32_t(seed), std::uint32_t(seed >> 32)};
}

// Uniform on (0, 1] from two 32-bit words; never returns 0 so log() is safe.
inline double rng_to_unit(std::uint32_t hi, std::uint32_t lo) {
  const std::uint64_t x = (std::uint64_t(hi) << 32) | lo;
  return double(x) * 0x1p-64 + 0x1p-65;
}

inline std::uint64_t rng_u64(std::uint64_t seed, std::array<std::uint32_t, 4> ctr) {
  const auto r = Philox4x32::block(ctr, rng_key(seed));
  return (std::uint64_t(r[0]) << 32) | r[1];
}

inline double rng_uniform(std::uint64_t seed, std::array<std::uint32_t, 4> ctr) {
  const auto r = Philox4x32::block(ctr, rng_key(seed));
  return rng_to_unit(r[0], r[1]);
}

// Two independent standard normals from one counter block (Box-Muller).
inline std::pair<double, double> rng_gaussian_pair(std::uint64_t seed,
                                                   std::array<std::uint32_t, 4> ctr) {
  const auto r = Philox4x32::block(ctr, rng_key(seed));
  const double u1 = rng_to_unit(r[0], r[1]);
  const double u2 = rng_to_unit(r[2], r[3]);
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 6.28318530717958647692 * u2;
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

}  // namespace dmimo
