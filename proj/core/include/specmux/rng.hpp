#pragma once

#include <cmath>
#include <cstdint>

namespace specmux {

/// splitmix64 step; used both as a standalone mixer for seed derivation and
/// to seed the main generator.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Derive an independent stream seed from a parent seed and a stream id.
/// Used to give every sweep point / batch / source its own generator so that
/// results do not depend on thread scheduling.
inline std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t stream_id) {
  std::uint64_t s = parent ^ (0x9e3779b97f4a7c15ULL * (stream_id + 1));
  splitmix64(s);
  return splitmix64(s);
}

/// xoshiro256** — small, fast, and with stable cross-platform output
/// (unlike the standard-library distributions, whose algorithms are
/// implementation defined). Byte-identical reruns are part of the contract.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0x853c49e6748fea9bULL) {
    std::uint64_t sm = seed;
    for (auto& word : state_) word = splitmix64(sm);
  }

  std::uint64_t next_u64() {
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

  /// Uniform double in (0, 1]; never returns 0 so log(u) is always finite.
  double uniform() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  bool bernoulli(double p) { return uniform() <= p; }

  /// Single-mode thermal (Bose-Einstein) photon number,
  /// p(n) = mu^n / (1 + mu)^(n+1): geometric with P(n >= k) = (mu/(1+mu))^k,
  /// sampled by CDF inversion.
  std::uint32_t thermal(double mean) {
    if (mean <= 0.0) return 0;
    const double log_ratio = std::log(mean / (1.0 + mean));
    const double n = std::floor(std::log(uniform()) / log_ratio);
    return n > 4.0e9 ? 4000000000u : static_cast<std::uint32_t>(n);
  }

  /// Number of failures before the next success for success probability p;
  /// the gap-jumping primitive of the sparse kernel.
  std::uint64_t geometric_gap(double p) {
    if (p >= 1.0) return 0;
    if (p <= 0.0) return UINT64_MAX;
    const double g = std::floor(std::log(uniform()) / std::log1p(-p));
    return g > 9.0e18 ? UINT64_MAX : static_cast<std::uint64_t>(g);
  }

  /// Poisson sample; exact product method for small means, rounded normal
  /// approximation for large means (used only for count-level noise where
  /// the relative error of the approximation is far below Poisson noise).
  std::uint64_t poisson(double mean) {
    if (mean <= 0.0) return 0;
    if (mean < 30.0) {
      const double limit = std::exp(-mean);
      double prod = uniform();
      std::uint64_t n = 0;
      while (prod > limit) {
        prod *= uniform();
        ++n;
      }
      return n;
    }
    const double g = normal() * std::sqrt(mean) + mean;
    return g < 0.5 ? 0 : static_cast<std::uint64_t>(g + 0.5);
  }

  /// Standard normal via Box-Muller (one value per call; simple over fast).
  double normal() {
    const double u1 = uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4];
};

}  // namespace specmux
