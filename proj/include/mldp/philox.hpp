#pragma once

// Philox4x32-10 counter-based generator (Salmon et al., SC'11).  A draw is a
// pure function of (key, counter), so every sample index owns an independent
// stream regardless of scheduling.

#include <array>
#include <cstdint>

namespace mldp {

class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter block(Counter ctr, Key key) {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kWeyl0;
        key[1] += kWeyl1;
      }
      const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * ctr[0];
      const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * ctr[2];
      const auto hi0 = static_cast<std::uint32_t>(p0 >> 32);
      const auto lo0 = static_cast<std::uint32_t>(p0);
      const auto hi1 = static_cast<std::uint32_t>(p1 >> 32);
      const auto lo1 = static_cast<std::uint32_t>(p1);
      ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    }
    return ctr;
  }

 private:
  static constexpr std::uint32_t kMul0 = 0xD2511F53u;
  static constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
  static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;
};

// Sequential 64-bit words of the stream (seed, stream_index).
class PhiloxStream {
 public:
  PhiloxStream(std::uint64_t seed, std::uint64_t stream_index)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)},
        stream_lo_(static_cast<std::uint32_t>(stream_index)),
        stream_hi_(static_cast<std::uint32_t>(stream_index >> 32)) {}

  std::uint64_t next() {
    if (pos_ == 2) {
      const auto out = Philox4x32::block({stream_lo_, stream_hi_, block_lo_, block_hi_}, key_);
      buf_[0] = (static_cast<std::uint64_t>(out[1]) << 32) | out[0];
      buf_[1] = (static_cast<std::uint64_t>(out[3]) << 32) | out[2];
      if (++block_lo_ == 0) ++block_hi_;
      pos_ = 0;
    }
    return buf_[pos_++];
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

 private:
  Philox4x32::Key key_;
  std::uint32_t stream_lo_, stream_hi_;
  std::uint32_t block_lo_ = 0, block_hi_ = 0;
  std::array<std::uint64_t, 2> buf_{};
  int pos_ = 2;
};

}  // namespace mldp
