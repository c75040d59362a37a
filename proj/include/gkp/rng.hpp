#pragma once

// Counter-based random number generation for reproducible Monte-Carlo runs.
// Each (seed, stream) pair owns an independent sequence addressed by a block
// counter, so draws never depend on how samples are split across workers.

#include <array>
#include <cmath>
#include <cstdint>

#include "gkp/core.hpp"

namespace gkp {

namespace detail {

inline constexpr std::uint64_t kPhiloxMul0 = 0xD2E7470EE14C6C93ull;
inline constexpr std::uint64_t kPhiloxMul1 = 0xCA5A826395121157ull;
inline constexpr std::uint64_t kPhiloxWeyl0 = 0x9E3779B97F4A7C15ull;
inline constexpr std::uint64_t kPhiloxWeyl1 = 0xBB67AE8584CAA73Bull;

inline void philox_round(std::array<std::uint64_t, 4>& ctr,
                         const std::array<std::uint64_t, 2>& key) {
  const unsigned __int128 p0 =
      static_cast<unsigned __int128>(kPhiloxMul0) * ctr[0];
  const unsigned __int128 p1 =
      static_cast<unsigned __int128>(kPhiloxMul1) * ctr[2];
  const std::uint64_t hi0 = static_cast<std::uint64_t>(p0 >> 64);
  const std::uint64_t lo0 = static_cast<std::uint64_t>(p0);
  const std::uint64_t hi1 = static_cast<std::uint64_t>(p1 >> 64);
  const std::uint64_t lo1 = static_cast<std::uint64_t>(p1);
  ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
}

}  // namespace detail

// Philox 4x64 with 10 rounds: maps a 256-bit counter and 128-bit key to four
// statistically independent 64-bit words.
inline std::array<std::uint64_t, 4> philox4x64(std::array<std::uint64_t, 4> ctr,
                                               std::array<std::uint64_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    detail::philox_round(ctr, key);
    key[0] += detail::kPhiloxWeyl0;
    key[1] += detail::kPhiloxWeyl1;
  }
  return ctr;
}

// Standard-normal generator over the (seed, stream) substream. Consecutive
// counter blocks feed Box-Muller in pairs, four variates per block.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream) : key_{seed, stream} {}

  double normal() {
    if (pos_ == 4) refill();
    return buf_[pos_++];
  }

  std::uint64_t seed() const { return key_[0]; }
  std::uint64_t stream() const { return key_[1]; }

 private:
  // (x >> 11) keeps 53 bits; the half-step offset keeps u strictly inside
  // (0, 1) so log(u) stays finite.
  static double to_unit(std::uint64_t x) {
    return (static_cast<double>(x >> 11) + 0.5) * 0x1p-53;
  }

  void refill() {
    const std::array<std::uint64_t, 4> w = philox4x64({block_, 0, 0, 0}, key_);
    for (int i = 0; i < 2; ++i) {
      const double u1 = to_unit(w[2 * i]);
      const double u2 = to_unit(w[2 * i + 1]);
      const double r = std::sqrt(-2.0 * std::log(u1));
      buf_[2 * i] = r * std::cos(kTwoPi * u2);
      buf_[2 * i + 1] = r * std::sin(kTwoPi * u2);
    }
    ++block_;
    pos_ = 0;
  }

  std::array<std::uint64_t, 2> key_;
  std::uint64_t block_ = 0;
  std::array<double, 4> buf_{};
  int pos_ = 4;
};

}  // namespace gkp
