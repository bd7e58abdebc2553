#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace jot {

/// Binary tensor container ("BTSR"): little-endian header
///   magic "BTSR" | u16 version | u8 dtype | u8 rank | u64 shape[rank]
/// followed by the row-major payload. dtype 0 is float64; dtype 1 is a bit
/// field where each row (the last axis) is packed LSB-first and padded to a
/// byte boundary. Round-trips are bit exact; any version or structural
/// mismatch is rejected rather than coerced.
struct Tensor {
  enum class Type : std::uint8_t { Float64 = 0, Bits = 1 };

  Type type = Type::Float64;
  std::vector<std::uint64_t> shape;
  std::vector<double> f64;        // when type == Float64
  std::vector<std::uint8_t> bit;  // when type == Bits, one element per bit (0/1)

  std::uint64_t element_count() const;
};

constexpr std::uint16_t kTensorFormatVersion = 1;

void write_tensor(const Tensor& t, const std::string& path);
Tensor read_tensor(const std::string& path);

// Stream variants so several containers can share one file.
void write_tensor(const Tensor& t, std::ostream& out);
Tensor read_tensor(std::istream& in);

}  // namespace jot
