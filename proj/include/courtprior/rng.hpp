#ifndef COURTPRIOR_RNG_HPP
#define COURTPRIOR_RNG_HPP

#include <cstdint>
#include <string_view>

namespace courtprior {

/**
 * Deterministic splittable random stream.
 *
 * A stream is identified by a 64-bit seed plus a path of labels
 * (e.g. seed 7, path ["image", 42, "paste", 3]). Equal (seed, path)
 * always produces the same draw sequence; streams with different paths
 * are independent. Child derivation uses the stream's identity key, not
 * its consumed state, so the order in which children are created or
 * drawn from never matters.
 */
class RngStream {
public:
  explicit RngStream(uint64_t seed) : key_(finalize(GOLDEN ^ seed)), state_(key_) {}

  RngStream child(std::string_view label) const {
    return RngStream(finalize(key_ ^ fnv1a(label)), FromKey{});
  }

  RngStream child(uint64_t index) const {
    return RngStream(finalize(key_ ^ finalize(index + GOLDEN)), FromKey{});
  }

  uint64_t next_u64() {
    // splitmix64
    uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  /// Uniform double in [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Uniform integer in [lo, hi], both ends inclusive.
  int64_t uniform_int(int64_t lo, int64_t hi) {
    const uint64_t range = static_cast<uint64_t>(hi - lo) + 1;
    if (range == 0) return static_cast<int64_t>(next_u64()); // full 64-bit span
    const uint64_t v = static_cast<uint64_t>(
        (static_cast<__uint128_t>(next_u64()) * range) >> 64);
    return lo + static_cast<int64_t>(v);
  }

  bool bernoulli(double p) { return uniform() < p; }

private:
  struct FromKey {};
  RngStream(uint64_t key, FromKey) : key_(key), state_(key) {}

  static constexpr uint64_t GOLDEN = 0x9E3779B97F4A7C15ull;

  static uint64_t finalize(uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  static uint64_t fnv1a(std::string_view s) {
    uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ull;
    }
    return h;
  }

  uint64_t key_;
  uint64_t state_;
};

} // namespace courtprior

#endif
