#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace pencil {

// Deterministic splitmix64 stream.  We deliberately avoid std::mt19937 +
// std::normal_distribution because their output is not pinned across standard
// library implementations, and reproducibility of sampled certificates is part
// of the contract.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1) with 53-bit resolution.
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Standard normal via Box-Muller; caches the spare draw.
  double gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform01();
    double u2 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

 private:
  std::uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Stable derivation of per-purpose, per-index child seeds from a master seed.
// Ensures thread-count-independent determinism: work item k always sees the
// same stream no matter how restarts are scheduled.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t tag, std::uint64_t index) {
  Rng mix(master ^ (tag * 0x9e3779b97f4a7c15ULL) ^ (index + 0x517cc1b727220a95ULL));
  mix.next_u64();
  return mix.next_u64();
}

}  // namespace pencil
