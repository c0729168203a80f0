#ifndef HANABI_RNG_HPP_
#define HANABI_RNG_HPP_

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace hanabi {

// Deterministic random source. All sampling goes through the helpers below
// instead of std:: distributions so that seeded runs reproduce bit-exactly
// regardless of standard library version.
class Rng {
 public:
  explicit Rng(uint64_t seed) : gen_(seed) {}

  uint64_t NextUint64() { return gen_(); }

  // Uniform integer in [0, bound). bound must be > 0.
  uint32_t UniformInt(uint32_t bound) {
    return static_cast<uint32_t>(gen_() % bound);
  }

  // Uniform double in [0, 1) with 53 bits of entropy.
  double UniformReal() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller.
  double Gaussian() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = UniformReal();
    double u2 = UniformReal();
    while (u1 <= 0.0) u1 = UniformReal();
    const double mag = std::sqrt(-2.0 * std::log(u1));
    const double two_pi = 6.283185307179586476925286766559;
    spare_ = mag * std::sin(two_pi * u2);
    has_spare_ = true;
    return mag * std::cos(two_pi * u2);
  }

  template <typename T>
  void Shuffle(std::vector<T>& items) {
    for (size_t i = items.size(); i > 1; --i) {
      size_t j = UniformInt(static_cast<uint32_t>(i));
      std::swap(items[i - 1], items[j]);
    }
  }

  // Derives an independent child seed; used to hand each worker/episode its
  // own stream without consuming state in lockstep.
  static uint64_t DeriveSeed(uint64_t root, uint64_t stream) {
    // splitmix64 over the pair.
    uint64_t z = root + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::mt19937_64 gen_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace hanabi

#endif  // HANABI_RNG_HPP_
