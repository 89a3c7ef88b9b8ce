#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace treelight {

// mt19937_64 with hand-rolled uniform and Box-Muller normals, so a seed gives
// the same stream on every standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    spare_ = radius * std::sin(2.0 * 3.14159265358979323846 * u2);
    has_spare_ = true;
    return radius * std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  std::uint64_t next() { return engine_(); }

  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) { return engine_() % n; }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Independent stream for the k-th run derived from a base seed (splitmix64).
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t k) {
  std::uint64_t x = base + 0x9e3779b97f4a7c15ULL * (k + 1);
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace treelight
