#pragma once

// Portable xoshiro256** generator with keyed sub-streams.
//
// Every random quantity in the toolkit is drawn from a stream identified
// by (seed, purpose[, index...]); streams are seeded by hashing the key
// through splitmix64, so results do not depend on the standard library's
// distribution implementations or on the platform.

#include <array>
#include <cstdint>
#include <initializer_list>

namespace bar {

inline constexpr std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Stream purposes; values are part of the reproducibility contract.
enum class Purpose : std::uint64_t {
  graph = 0x6772617068ull,
  initial_state = 0x696e6974ull,
  transitions = 0x7472616e73ull,
  experiment_cell = 0x63656c6cull,
  test = 0x74657374ull,
};

/// Mixes a key sequence into one 64-bit seed.
inline std::uint64_t derive_seed(std::uint64_t seed, std::initializer_list<std::uint64_t> key) {
  std::uint64_t state = seed;
  std::uint64_t h = splitmix64(state);
  for (std::uint64_t k : key) {
    state = h ^ (k * 0xD6E8FEB86659FD93ull);
    h = splitmix64(state);
  }
  return h;
}

class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& word : s_) word = splitmix64(sm);
  }

  static Rng stream(std::uint64_t seed, Purpose purpose) {
    return Rng(derive_seed(seed, {static_cast<std::uint64_t>(purpose)}));
  }
  static Rng stream(std::uint64_t seed, Purpose purpose, std::uint64_t index) {
    return Rng(derive_seed(seed, {static_cast<std::uint64_t>(purpose), index}));
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }

  result_type operator()() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer on [0, n) by rejection (no modulo bias).
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = max() - max() % n;
    std::uint64_t x;
    do {
      x = (*this)();
    } while (x >= limit);
    return x % n;
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  std::array<std::uint64_t, 4> s_{};
};

}  // namespace bar
