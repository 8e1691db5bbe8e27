#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>

namespace dat {

// Purpose tags keep the randomness consumed by different phases of a round in
// disjoint streams, so adding draws to one phase never shifts another.
enum class Stream : std::uint64_t {
  param_init = 1,
  shard_assign = 2,
  batch_sample = 3,
  attack_init = 4,
  quantize_worker = 5,
  quantize_server = 6,
  data_gen = 7,
  eval_attack = 8,
  probe = 9,
};

namespace detail {
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}
}  // namespace detail

// Deterministic random stream keyed by (seed, a, b, purpose). The same key
// yields the same draw sequence on every run and under any thread schedule;
// callers pick (a, b) as e.g. (worker id, round index) or (sample index, 0).
// Draws avoid std:: distributions on purpose: their output is
// implementation-defined, while everything here is pinned to mt19937_64.
class SeededRng {
 public:
  SeededRng(std::uint64_t seed, std::uint64_t a, std::uint64_t b, Stream purpose)
      : engine_(stream_key(seed, a, b, purpose)) {}

  static std::uint64_t stream_key(std::uint64_t seed, std::uint64_t a, std::uint64_t b,
                                  Stream purpose) {
    using detail::mix64;
    std::uint64_t k = mix64(seed);
    k = mix64(k ^ a);
    k = mix64(k ^ b);
    k = mix64(k ^ static_cast<std::uint64_t>(purpose));
    return k;
  }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Standard normal via Box-Muller; the spare is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = 1.0 - uniform();  // (0, 1], keeps log finite
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double t = 2.0 * M_PI * u2;
    spare_ = r * std::sin(t);
    has_spare_ = true;
    return r * std::cos(t);
  }

  // Uniform integer in [0, n). Rejection keeps the draw exactly uniform.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t rem = std::numeric_limits<std::uint64_t>::max() % n;
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - rem;
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return x % n;
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace dat
