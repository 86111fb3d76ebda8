#pragma once

#include <cstdint>

namespace multipool {

/// Identifies the random stream of one trial. (master_seed, stream_id)
/// determines every draw the trial makes.
struct SeedSpec {
  std::uint64_t master_seed = 0;
  std::uint64_t stream_id = 0;
  friend bool operator==(const SeedSpec&, const SeedSpec&) = default;
};

/// Sub-streams of a trial, so infections and pool noise never share draws.
enum class StreamDomain : std::uint64_t { Infections = 1, PoolNoise = 2, Test = 3 };

inline constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

/// xoshiro256** keyed by (seed, domain) through SplitMix64.
class Rng {
 public:
  Rng(const SeedSpec& seed, StreamDomain domain) noexcept {
    std::uint64_t key = splitmix64(seed.master_seed);
    key = splitmix64(key ^ seed.stream_id);
    key = splitmix64(key ^ static_cast<std::uint64_t>(domain));
    for (auto& s : state_) {
      key += 0x9E3779B97F4A7C15ULL;
      s = splitmix64(key);
    }
  }

  std::uint64_t next() noexcept {
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

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// True with probability p; exact at p = 0 and p = 1.
  bool bernoulli(double p) noexcept { return uniform() < p; }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept { return (x << k) | (x >> (64 - k)); }
  std::uint64_t state_[4]{};
};

}  // namespace multipool
