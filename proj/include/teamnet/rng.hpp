#pragma once

#include <cassert>
#include <cstdint>
#include <string_view>

namespace teamnet {

// splitmix64; seeds the main generator and derives named substreams.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

// xoshiro256**. A fixed algorithm so seeded streams are byte-identical on
// every platform; the <random> distributions are implementation-defined and
// would break event-log reproducibility across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    SplitMix64 sm(seed);
    for (auto& word : state_) word = sm.next();
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // Unbiased draw from [0, bound) by rejection.
  std::uint64_t uniform_below(std::uint64_t bound) {
    assert(bound > 0);
    const std::uint64_t threshold = (0 - bound) % bound;  // 2^64 mod bound
    for (;;) {
      const std::uint64_t r = next();
      if (r >= threshold) return r % bound;
    }
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::uint64_t state_[4];
};

inline std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

// Named substream: consuming one stream differently never perturbs the others.
inline std::uint64_t derive_seed(std::uint64_t base, std::string_view stream) {
  SplitMix64 sm(base ^ fnv1a64(stream));
  return sm.next();
}

// Indexed substream, e.g. one independent stream per announcement tick.
inline std::uint64_t derive_seed(std::uint64_t base, std::string_view stream, std::uint64_t index) {
  SplitMix64 sm(derive_seed(base, stream) ^ (0x9e3779b97f4a7c15ull * (index + 1)));
  return sm.next();
}

}  // namespace teamnet
