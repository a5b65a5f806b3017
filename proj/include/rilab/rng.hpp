#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace rilab {

__extension__ using uint128 = unsigned __int128;

/// Philox4x64-10 block function (Salmon, Moraes, Dror, Shaw; SC'11).
///
/// Ten rounds of the 4x64 Philox bijection with multipliers 0xD2E7470EE14C6C93,
/// 0xCA5A826395121157 and Weyl key increments 0x9E3779B97F4A7C15,
/// 0xBB67AE8584CAA73B. Matches the Random123 reference and numpy's Philox.
struct Philox4x64 {
  using Counter = std::array<std::uint64_t, 4>;
  using Key = std::array<std::uint64_t, 2>;
  static Counter block(Counter ctr, Key key);
};

/// Counter-based random stream.
///
/// The key is (seed, stream id); counter word 0 is the block index and counter
/// word 1 is a purpose tag, so every (seed, stream, tag) triple names an
/// independent sequence that can be reconstructed on any worker. Satisfies
/// UniformRandomBitGenerator.
class RandomStream {
public:
  using result_type = std::uint64_t;

  RandomStream(std::uint64_t seed, std::uint64_t stream, std::uint64_t tag = 0)
      : key_{seed, stream}, tag_(tag) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    if (pos_ == 4) refill();
    return buf_[pos_++];
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound) by Lemire's multiply-shift with rejection.
  std::uint64_t below(std::uint64_t bound);

  std::uint64_t blocks_used() const { return block_; }

private:
  void refill() {
    buf_ = Philox4x64::block({block_++, tag_, 0, 0}, key_);
    pos_ = 0;
  }

  Philox4x64::Key key_;
  std::uint64_t tag_;
  std::uint64_t block_ = 0;
  Philox4x64::Counter buf_{};
  int pos_ = 4;
};

/// Purpose tags that keep differently-used streams disjoint under one seed.
namespace stream_tag {
inline constexpr std::uint64_t walk = 0;
inline constexpr std::uint64_t capacity = 1;
inline constexpr std::uint64_t mixing = 2;
inline constexpr std::uint64_t lerw = 3;
inline constexpr std::uint64_t sigma = 4;
inline constexpr std::uint64_t pattern = 5;
}  // namespace stream_tag

inline Philox4x64::Counter Philox4x64::block(Counter ctr, Key key) {
  constexpr std::uint64_t kMul0 = 0xD2E7470EE14C6C93ULL;
  constexpr std::uint64_t kMul1 = 0xCA5A826395121157ULL;
  constexpr std::uint64_t kWeyl0 = 0x9E3779B97F4A7C15ULL;
  constexpr std::uint64_t kWeyl1 = 0xBB67AE8584CAA73BULL;
  for (int round = 0; round < 10; ++round) {
    const uint128 p0 = static_cast<uint128>(kMul0) * ctr[0];
    const uint128 p1 = static_cast<uint128>(kMul1) * ctr[2];
    const auto hi0 = static_cast<std::uint64_t>(p0 >> 64);
    const auto lo0 = static_cast<std::uint64_t>(p0);
    const auto hi1 = static_cast<std::uint64_t>(p1 >> 64);
    const auto lo1 = static_cast<std::uint64_t>(p1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kWeyl0;
    key[1] += kWeyl1;
  }
  return ctr;
}

inline std::uint64_t RandomStream::below(std::uint64_t bound) {
  uint128 m = static_cast<uint128>((*this)()) * bound;
  auto low = static_cast<std::uint64_t>(m);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      m = static_cast<uint128>((*this)()) * bound;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

}  // namespace rilab
