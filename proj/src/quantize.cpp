#include "dat/quantize.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

namespace dat {

namespace {

std::uint64_t level_count(int bits) { return std::uint64_t{1} << bits; }

// Continuous LSB-first bit stream over a byte buffer.
class BitWriter {
 public:
  void write(std::uint64_t value, int bit_count) {
    for (int i = 0; i < bit_count; ++i) {
      const std::size_t byte = pos_ / 8;
      if (byte >= bytes_.size()) bytes_.push_back(0);
      if ((value >> i) & 1ULL) bytes_[byte] |= static_cast<std::uint8_t>(1u << (pos_ % 8));
      ++pos_;
    }
  }

  void align_to_byte() { pos_ = (pos_ + 7) / 8 * 8; }

  std::vector<std::uint8_t> take() {
    bytes_.resize((pos_ + 7) / 8, 0);
    return std::move(bytes_);
  }

 private:
  std::vector<std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

class BitReader {
 public:
  explicit BitReader(const std::vector<std::uint8_t>& bytes) : bytes_(bytes) {}

  std::uint64_t read(int bit_count) {
    std::uint64_t value = 0;
    for (int i = 0; i < bit_count; ++i) {
      const std::size_t byte = pos_ / 8;
      if (byte >= bytes_.size()) throw DecodeError("quantized message: truncated bit stream");
      if ((bytes_[byte] >> (pos_ % 8)) & 1u) value |= std::uint64_t{1} << i;
      ++pos_;
    }
    return value;
  }

  void align_to_byte() { pos_ = (pos_ + 7) / 8 * 8; }

  std::size_t byte_pos() const { return pos_ / 8; }

 private:
  const std::vector<std::uint8_t>& bytes_;
  std::size_t pos_ = 0;
};

std::uint64_t base_bits(Index dim, int bits) {
  return 32 + static_cast<std::uint64_t>(dim) * (1 + static_cast<std::uint64_t>(bits));
}

}  // namespace

QuantizedGradMessage quantize(const Vector& g, int bits, SeededRng& rng) {
  if (bits < 1 || bits > 32) throw std::invalid_argument("quantize: bits must be in [1, 32]");
  if (!g.allFinite()) throw std::runtime_error("quantize: non-finite input");

  const Index d = g.size();
  QuantizedGradMessage msg;
  msg.bits = bits;
  msg.signs.assign(static_cast<std::size_t>(d), 0);
  msg.levels.assign(static_cast<std::size_t>(d), 0);

  const double norm = g.norm();
  msg.norm = norm == 0.0 ? 0.0f : static_cast<float>(norm);
  msg.bits_used = base_bits(d, bits);
  if (norm == 0.0) return msg;

  const auto s = level_count(bits);
  const double s_real = static_cast<double>(s);
  for (Index j = 0; j < d; ++j) {
    const double ratio = std::min(std::abs(g[j]) / norm, 1.0);
    const double scaled = ratio * s_real;
    double lower = std::floor(scaled);
    const double u = rng.uniform();
    std::uint64_t level;
    if (lower >= s_real) {
      level = s;  // ratio exactly 1 maps to the top grid point
    } else {
      level = static_cast<std::uint64_t>(lower) + (u < scaled - lower ? 1 : 0);
    }
    msg.signs[static_cast<std::size_t>(j)] = g[j] < 0.0 ? 1 : 0;
    if (level == s) {
      msg.levels[static_cast<std::size_t>(j)] = static_cast<std::uint32_t>(s - 1);
      msg.overflow.push_back(static_cast<std::uint32_t>(j));
    } else {
      msg.levels[static_cast<std::size_t>(j)] = static_cast<std::uint32_t>(level);
    }
  }
  msg.bits_used += 32 * static_cast<std::uint64_t>(msg.overflow.size());
  return msg;
}

Vector decode(const QuantizedGradMessage& msg) {
  const Index d = msg.dim();
  if (msg.signs.size() != static_cast<std::size_t>(d)) {
    throw DecodeError("quantized message: sign/level length mismatch");
  }
  const double s_real = static_cast<double>(level_count(msg.bits));
  Vector out = Vector::Zero(d);
  if (msg.norm == 0.0f) return out;

  std::vector<std::uint8_t> bump(static_cast<std::size_t>(d), 0);
  for (std::uint32_t idx : msg.overflow) {
    if (idx >= static_cast<std::uint32_t>(d)) throw DecodeError("quantized message: overflow index out of range");
    bump[idx] = 1;
  }
  const double norm = static_cast<double>(msg.norm);
  for (Index j = 0; j < d; ++j) {
    const std::size_t sj = static_cast<std::size_t>(j);
    const double xi = (static_cast<double>(msg.levels[sj]) + bump[sj]) / s_real;
    const double sign = msg.signs[sj] ? -1.0 : 1.0;
    out[j] = norm * sign * xi;
  }
  return out;
}

std::vector<std::uint8_t> serialize(const QuantizedGradMessage& msg) {
  BitWriter writer;
  writer.write(std::bit_cast<std::uint32_t>(msg.norm), 32);
  for (std::uint8_t sign : msg.signs) writer.write(sign, 1);
  for (std::uint32_t level : msg.levels) writer.write(level, msg.bits);
  writer.align_to_byte();
  for (std::uint32_t idx : msg.overflow) writer.write(idx, 32);
  return writer.take();
}

QuantizedGradMessage deserialize(const std::vector<std::uint8_t>& bytes, Index dim, int bits) {
  if (bits < 1 || bits > 32) throw std::invalid_argument("deserialize: bits must be in [1, 32]");
  const std::uint64_t base = base_bits(dim, bits);
  const std::size_t base_bytes = static_cast<std::size_t>((base + 7) / 8);
  if (bytes.size() < base_bytes) throw DecodeError("quantized message: truncated input");
  if ((bytes.size() - base_bytes) % 4 != 0) {
    throw DecodeError("quantized message: malformed overflow section");
  }

  QuantizedGradMessage msg;
  msg.bits = bits;
  BitReader reader(bytes);
  msg.norm = std::bit_cast<float>(static_cast<std::uint32_t>(reader.read(32)));
  msg.signs.resize(static_cast<std::size_t>(dim));
  msg.levels.resize(static_cast<std::size_t>(dim));
  for (auto& sign : msg.signs) sign = static_cast<std::uint8_t>(reader.read(1));
  for (auto& level : msg.levels) level = static_cast<std::uint32_t>(reader.read(bits));
  reader.align_to_byte();

  const std::size_t overflow_count = (bytes.size() - base_bytes) / 4;
  for (std::size_t k = 0; k < overflow_count; ++k) {
    const auto idx = static_cast<std::uint32_t>(reader.read(32));
    if (idx >= static_cast<std::uint32_t>(dim)) {
      throw DecodeError("quantized message: overflow index out of range");
    }
    msg.overflow.push_back(idx);
  }
  msg.bits_used = base + 32 * static_cast<std::uint64_t>(overflow_count);
  return msg;
}

double empirical_variance(const Vector& g, int bits, int trials, SeededRng& rng) {
  if (trials < 1) throw std::invalid_argument("empirical_variance: trials must be >= 1");
  double total = 0.0;
  for (int t = 0; t < trials; ++t) {
    total += (decode(quantize(g, bits, rng)) - g).squaredNorm();
  }
  return total / static_cast<double>(trials);
}

double quantizer_variance_bound(Index dim, int bits) {
  const double s = static_cast<double>(level_count(bits));
  const double d = static_cast<double>(dim);
  return std::min(d / (s * s), std::sqrt(d) / s);
}

}  // namespace dat
