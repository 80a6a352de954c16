#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace nasgraph::rng {

/// splitmix64 mixing step (Vigna). Used to spread user seeds and to derive
/// independent per-stream seeds from (seed, stream_id).
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

inline std::uint64_t derive_stream(std::uint64_t seed, std::uint64_t stream) {
  return splitmix64(splitmix64(seed) ^ 0x6a09e667f3bcc909ULL ^
                    splitmix64(stream * 0x2545f4914f6cdd1dULL + 1));
}

/// Uniform integer in [0, n). Rejection on the top of the 64-bit range;
/// std::uniform_int_distribution is implementation-defined, this is not.
inline std::uint64_t bounded(std::mt19937_64& gen, std::uint64_t n) {
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  std::uint64_t x = gen();
  while (x >= limit) x = gen();
  return x % n;
}

/// Uniform double in [0, 1) with 53 random bits.
inline double uniform01(std::mt19937_64& gen) {
  return static_cast<double>(gen() >> 11) * 0x1.0p-53;
}

/// Standard normal stream: mt19937_64 + Marsaglia polar transform.
/// std::normal_distribution is implementation-defined, so the transform is
/// written out to pin the value sequence to the (fully specified) engine.
class NormalSampler {
 public:
  explicit NormalSampler(std::uint64_t seed) : gen_(seed) {}

  double next() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform01(gen_) - 1.0;
      v = 2.0 * uniform01(gen_) - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double scale = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * scale;
    has_spare_ = true;
    return u * scale;
  }

 private:
  std::mt19937_64 gen_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace nasgraph::rng
