#pragma once

#include <cmath>
#include <cstdint>

namespace spot::rng {

// All randomness in the library flows through the splitmix64 generator and
// the Box-Muller transform below, so a given seed reproduces the same
// sequences on every platform. Golden values are pinned in the test suite.

/// Advances a splitmix64 state and returns the next 64-bit output.
inline uint64_t splitmix_next(uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Deterministic stream state for the pair (seed, key). Used to give every
/// (seed, sample-time) pair its own independent, order-free random stream.
inline uint64_t keyed_state(uint64_t seed, uint64_t key) {
  uint64_t s = seed ^ (0x9E3779B97F4A7C15ull * (key + 0x632BE59BD9B4E019ull));
  (void)splitmix_next(s);
  return s;
}

/// Maps 64 random bits onto [0, 1).
inline double to_unit(uint64_t bits) { return static_cast<double>(bits >> 11) * 0x1.0p-53; }

/// Standard normal deviate via Box-Muller; consumes two 64-bit words.
inline double gaussian(uint64_t b1, uint64_t b2) {
  const double u1 = 1.0 - to_unit(b1);  // (0, 1], keeps log() finite
  const double u2 = to_unit(b2);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.28318530717958647692 * u2);
}

/// Sequential standard-normal source over a seeded splitmix64 engine.
class GaussianStream {
 public:
  explicit GaussianStream(uint64_t seed) : state_(seed) { (void)splitmix_next(state_); }

  double next() {
    const uint64_t a = splitmix_next(state_);
    const uint64_t b = splitmix_next(state_);
    return gaussian(a, b);
  }

  uint64_t next_bits() { return splitmix_next(state_); }

 private:
  uint64_t state_;
};

}  // namespace spot::rng
