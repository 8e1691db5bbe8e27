#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "dat/rng.hpp"
#include "dat/types.hpp"

namespace dat {

enum class QuantMode { off, one_sided, two_sided };

struct QuantizerConfig {
  int bits = 8;  // b in [1, 32]; s = 2^b quantization levels
  QuantMode mode = QuantMode::off;

  void validate() const {
    if (bits < 1 || bits > 32) throw std::invalid_argument("QuantizerConfig: bits must be in [1, 32]");
  }
};

struct DecodeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Randomized quantization of a gradient vector: per component the magnitude
// ratio |g_j| / ||g||_2 is rounded stochastically onto the grid {0/s, ..., s/s}
// so the decoded value is unbiased. Levels are stored in b bits covering
// {0, ..., s-1}; the boundary draw that lands on level s (possible only when
// the ratio is within 1/s of 1) is stored as s-1 with the component index
// appended to `overflow`, and decode adds the missing 1/s back. The common
// no-overflow encoding costs exactly 32 + d + b*d bits.
struct QuantizedGradMessage {
  float norm = 0.0f;                    // ||g||_2 as transmitted (binary32)
  std::vector<std::uint8_t> signs;      // 1 = negative component
  std::vector<std::uint32_t> levels;    // stored level per component, <= s-1
  std::vector<std::uint32_t> overflow;  // ascending indices whose draw hit level s
  int bits = 1;                         // b
  std::uint64_t bits_used = 0;          // 32 + d + b*d + 32 * |overflow|

  Index dim() const { return static_cast<Index>(levels.size()); }
};

QuantizedGradMessage quantize(const Vector& g, int bits, SeededRng& rng);

Vector decode(const QuantizedGradMessage& msg);

// Wire format, all fields packed LSB-first into a continuous bit stream:
// norm as IEEE-754 binary32 little-endian, d sign bits (component j at bit j),
// d level fields of b bits each, zero padding to the next byte boundary, then
// one uint32 (little-endian) per overflow index. Byte length is
// ceil(bits_used / 8).
std::vector<std::uint8_t> serialize(const QuantizedGradMessage& msg);

QuantizedGradMessage deserialize(const std::vector<std::uint8_t>& bytes, Index dim, int bits);

// Monte Carlo estimate of E || Q(g) - g ||^2 over fresh draws.
double empirical_variance(const Vector& g, int bits, int trials, SeededRng& rng);

// Variance bound of the randomized quantizer, relative to ||g||^2:
// min(d / s^2, sqrt(d) / s).
double quantizer_variance_bound(Index dim, int bits);

}  // namespace dat
