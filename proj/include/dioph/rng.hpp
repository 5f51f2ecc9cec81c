#pragma once

#include <array>
#include <cstdint>

#include "dioph/counting.hpp"

namespace dioph {

// Philox4x32-10 (Salmon et al., SC'11). Stateless: output depends only on
// (counter, key).
class Philox4x32 {
 public:
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter generate(Counter ctr, Key key) {
    for (int round = 0; round < 10; ++round) {
      if (round > 0) {
        key[0] += kW0;
        key[1] += kW1;
      }
      const std::uint64_t p0 = static_cast<std::uint64_t>(kM0) * ctr[0];
      const std::uint64_t p1 = static_cast<std::uint64_t>(kM1) * ctr[2];
      ctr = {static_cast<std::uint32_t>(p1 >> 32) ^ ctr[1] ^ key[0], static_cast<std::uint32_t>(p1),
             static_cast<std::uint32_t>(p0 >> 32) ^ ctr[3] ^ key[1], static_cast<std::uint32_t>(p0)};
    }
    return ctr;
  }

 private:
  static constexpr std::uint32_t kM0 = 0xD2511F53u;
  static constexpr std::uint32_t kM1 = 0xCD9E8D57u;
  static constexpr std::uint32_t kW0 = 0x9E3779B9u;
  static constexpr std::uint32_t kW1 = 0xBB67AE85u;
};

// Per-sample stream: key = seed, counter = (index, draw). Each block of four
// words yields two uniforms k 2^-53.
class SampleStream {
 public:
  SampleStream(std::uint64_t seed, std::uint64_t index)
      : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)}, index_(index) {}

  double uniform() {
    if (slot_ == 2) refill();
    const std::uint64_t hi = block_[2 * slot_] >> 5;
    const std::uint64_t lo = block_[2 * slot_ + 1] >> 6;
    ++slot_;
    return static_cast<double>((hi << 26) | lo) * 0x1p-53;
  }

 private:
  void refill() {
    block_ = Philox4x32::generate({static_cast<std::uint32_t>(index_), static_cast<std::uint32_t>(index_ >> 32),
                                   static_cast<std::uint32_t>(draw_), static_cast<std::uint32_t>(draw_ >> 32)},
                                  key_);
    ++draw_;
    slot_ = 0;
  }

  Philox4x32::Key key_;
  std::uint64_t index_;
  std::uint64_t draw_ = 0;
  Philox4x32::Counter block_{};
  int slot_ = 2;
};

// Haar-random point of the torus M_{m,n}([0,1)).
inline MatrixU sample_u(std::uint64_t seed, std::uint64_t index, int m, int n) {
  SampleStream stream(seed, index);
  std::vector<double> entries(static_cast<std::size_t>(m) * n);
  for (auto& e : entries) e = stream.uniform();
  return MatrixU(m, n, std::move(entries));
}

}  // namespace dioph
