#pragma once

#include <array>
#include <cstdint>

namespace clsparse {

/// Philox4x32-10 (Salmon et al., "Parallel random numbers: as easy as
/// 1, 2, 3"). Stateless: each draw is a pure function of (key, counter),
/// so samples can be generated in any order or on any thread.
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  explicit constexpr Philox4x32(std::uint64_t seed) noexcept
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)} {}

  constexpr Counter operator()(Counter ctr) const noexcept {
    Key key = key_;
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kWeyl0;
        key[1] += kWeyl1;
      }
      ctr = single_round(ctr, key);
    }
    return ctr;
  }

 private:
  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

  static constexpr Counter single_round(const Counter& c, const Key& k) noexcept {
    const std::uint64_t p0 = std::uint64_t{kMul0} * c[0];
    const std::uint64_t p1 = std::uint64_t{kMul1} * c[2];
    const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const auto lo0 = static_cast<std::uint32_t>(p0);
    const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const auto lo1 = static_cast<std::uint32_t>(p1);
    return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
  }

  Key key_;
};

/// Uniform doubles keyed by (seed, stream, index, lane). `stream` separates
/// independent uses of one seed (attempt number, sample number, ...).
class CounterRng {
 public:
  explicit constexpr CounterRng(std::uint64_t seed) noexcept : philox_(seed) {}

  constexpr std::uint64_t bits(std::uint64_t stream, std::uint32_t index,
                               std::uint32_t lane = 0) const noexcept {
    const auto out = philox_({static_cast<std::uint32_t>(stream),
                              static_cast<std::uint32_t>(stream >> 32), index, lane});
    return (std::uint64_t{out[0]} << 32) | out[1];
  }

  /// Uniform on [0, 1) with 53 random bits.
  constexpr double uniform(std::uint64_t stream, std::uint32_t index,
                           std::uint32_t lane = 0) const noexcept {
    return static_cast<double>(bits(stream, index, lane) >> 11) * 0x1.0p-53;
  }

 private:
  Philox4x32 philox_;
};

}  // namespace clsparse
