#ifndef DPPO_RNG_HPP_
#define DPPO_RNG_HPP_

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>

namespace dppo {

// SplitMix64 finalizer; a bijective 64-bit mixer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Derives a stream key from a seed and a path of integers, e.g.
// (experiment seed, worker id, iteration).
constexpr std::uint64_t derive_key(std::uint64_t seed,
                                   std::initializer_list<std::uint64_t> path) {
  std::uint64_t k = mix64(seed);
  for (std::uint64_t p : path) k = mix64(k ^ mix64(p + 0x632be59bd9b4e019ULL));
  return k;
}

// Counter-based generator: output n is mix(key, n). Streams keyed by
// different paths are independent, and a stream's draws depend only on its
// key and position, so results are identical on every platform.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t key = 0) : key_(key) {}
  static CounterRng keyed(std::uint64_t seed,
                          std::initializer_list<std::uint64_t> path) {
    return CounterRng(derive_key(seed, path));
  }

  std::uint64_t next_u64() {
    return mix64(key_ ^ mix64(counter_++));
  }

  // Uniform on [0, 1) with 53 bits of resolution.
  double uniform() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via Box-Muller (one variate per two uniforms).
  double normal() {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }
  void set_counter(std::uint64_t c) { counter_ = c; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace dppo

#endif  // DPPO_RNG_HPP_
