#pragma once

#include <cstdint>
#include <cmath>
#include <vector>

namespace rsfft {

// Deterministic splittable RNG. Every consumer derives its own stream from
// (seed, stream ids), so results do not depend on thread scheduling or on
// library implementations of <random> distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : state_(mix(seed ^ kGolden)) {}

  // Child stream keyed by an id; independent of draws made on the parent.
  Rng derived(std::uint64_t id) const {
    Rng child;
    child.state_ = mix(state_ ^ mix(id + kGolden));
    return child;
  }
  Rng derived(std::uint64_t a, std::uint64_t b) const {
    return derived(a).derived(b);
  }

  std::uint64_t next_u64() {
    state_ += kGolden;
    return mix(state_);
  }

  // Uniform in [0, 1) with 53-bit resolution.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Uniform in {0, ..., n-1}; unbiased via rejection.
  std::uint64_t below(std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return x % n;
  }

  bool coin(double p) { return uniform01() < p; }

  int sign() { return (next_u64() & 1) ? 1 : -1; }

  double normal() {
    // Box-Muller; one value per call keeps the draw sequence simple.
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double u2 = uniform01();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
  }

  // k distinct values from {0, ..., n-1}, ascending. Requires k <= n.
  std::vector<std::uint64_t> distinct(std::uint64_t k, std::uint64_t n);

 private:
  static constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ull;

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  std::uint64_t state_ = 0;
};

}  // namespace rsfft
