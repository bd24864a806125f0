#ifndef AEBSIM_RNG_HPP
#define AEBSIM_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace aebsim {

/// Deterministic random stream.
///
/// mt19937_64 under the hood with an explicit bit-to-double conversion and an
/// explicit Gaussian transform, so identical seeds yield identical draws on
/// every platform (the std:: distribution adapters are implementation-defined
/// and would break byte-identical run logs).
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1) with 53-bit resolution.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  /// Standard normal via Marsaglia's polar method.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u = 0.0, v = 0.0, s = 0.0;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double k = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * k;
    have_spare_ = true;
    return u * k;
  }

  double normal(double mean, double stddev) { return mean + stddev * normal(); }

  /// Derive the seed of an independent child stream (splitmix64 mixing).
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (salt + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace aebsim

#endif  // AEBSIM_RNG_HPP
