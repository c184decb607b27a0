#pragma once

#include <array>
#include <cstdint>

namespace dbdpp {

// Counter-based generator (Philox 4x32, 10 rounds).  A (seed, stream) pair
// keys an independent sequence whose draws depend only on the key and a
// block counter, never on shared state.  Parallel consumers assign one
// stream per Monte-Carlo sample index, which makes every statistic
// reproducible regardless of thread count or scheduling.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream)
      : key_{static_cast<std::uint32_t>(seed),
             static_cast<std::uint32_t>(seed >> 32)},
        ctr_{0, 0, static_cast<std::uint32_t>(stream),
             static_cast<std::uint32_t>(stream >> 32)} {}

  std::uint64_t next_u64() {
    if (pos_ > 2) refill();
    const std::uint64_t lo = buf_[pos_];
    const std::uint64_t hi = buf_[pos_ + 1];
    pos_ += 2;
    return lo | (hi << 32);
  }

  // Uniform in [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

 private:
  void refill() {
    std::array<std::uint32_t, 2> k = key_;
    buf_ = ctr_;
    round(buf_, k);
    for (int r = 1; r < 10; ++r) {
      k[0] += 0x9E3779B9u;
      k[1] += 0xBB67AE85u;
      round(buf_, k);
    }
    if (++ctr_[0] == 0) ++ctr_[1];  // 64-bit block counter; lanes 2,3 hold the stream
    pos_ = 0;
  }

  static void round(std::array<std::uint32_t, 4>& x,
                    const std::array<std::uint32_t, 2>& k) {
    const std::uint64_t m0 = std::uint64_t{0xD2511F53u} * x[0];
    const std::uint64_t m1 = std::uint64_t{0xCD9E8D57u} * x[2];
    x = {static_cast<std::uint32_t>(m1 >> 32) ^ x[1] ^ k[0],
         static_cast<std::uint32_t>(m1),
         static_cast<std::uint32_t>(m0 >> 32) ^ x[3] ^ k[1],
         static_cast<std::uint32_t>(m0)};
  }

  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> ctr_;
  std::array<std::uint32_t, 4> buf_{};
  int pos_ = 4;  // force refill on first draw
};

}  // namespace dbdpp
