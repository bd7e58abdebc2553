#include "jot/tensor.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

namespace jot {

static_assert(std::endian::native == std::endian::little,
              "tensor container assumes a little-endian host");

namespace {

constexpr char kMagic[4] = {'B', 'T', 'S', 'R'};
constexpr std::uint8_t kMaxRank = 8;

template <typename T>
void put(std::ostream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(T));
}

template <typename T>
T get(std::istream& in) {
  T value{};
  in.read(reinterpret_cast<char*>(&value), sizeof(T));
  if (!in) throw std::runtime_error("tensor: truncated file");
  return value;
}

}  // namespace

std::uint64_t Tensor::element_count() const {
  std::uint64_t n = 1;
  for (std::uint64_t d : shape) n *= d;
  return shape.empty() ? 0 : n;
}

void write_tensor(const Tensor& t, std::ostream& out) {
  if (t.shape.empty() || t.shape.size() > kMaxRank)
    throw std::invalid_argument("tensor: rank must be in [1,8]");
  for (std::uint64_t d : t.shape)
    if (d == 0) throw std::invalid_argument("tensor: zero-length axis");
  const std::uint64_t count = t.element_count();

  out.write(kMagic, 4);
  put<std::uint16_t>(out, kTensorFormatVersion);
  put<std::uint8_t>(out, static_cast<std::uint8_t>(t.type));
  put<std::uint8_t>(out, static_cast<std::uint8_t>(t.shape.size()));
  for (std::uint64_t d : t.shape) put<std::uint64_t>(out, d);

  if (t.type == Tensor::Type::Float64) {
    if (t.f64.size() != count) throw std::invalid_argument("tensor: payload size mismatch");
    out.write(reinterpret_cast<const char*>(t.f64.data()),
              static_cast<std::streamsize>(count * sizeof(double)));
  } else {
    if (t.bit.size() != count) throw std::invalid_argument("tensor: payload size mismatch");
    const std::uint64_t row = t.shape.back();
    const std::uint64_t rows = count / row;
    const std::uint64_t row_bytes = (row + 7) / 8;
    std::vector<std::uint8_t> packed(row_bytes);
    for (std::uint64_t r = 0; r < rows; ++r) {
      std::fill(packed.begin(), packed.end(), 0);
      for (std::uint64_t i = 0; i < row; ++i)
        if (t.bit[r * row + i]) packed[i / 8] |= static_cast<std::uint8_t>(1u << (i % 8));
      out.write(reinterpret_cast<const char*>(packed.data()),
                static_cast<std::streamsize>(row_bytes));
    }
  }
  if (!out) throw std::runtime_error("tensor: write failed");
}

Tensor read_tensor(std::istream& in) {
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kMagic, 4) != 0)
    throw std::runtime_error("tensor: bad magic (not a BTSR file)");
  const auto version = get<std::uint16_t>(in);
  if (version != kTensorFormatVersion)
    throw std::runtime_error("tensor: unsupported format version " + std::to_string(version));
  const auto type_code = get<std::uint8_t>(in);
  if (type_code > 1) throw std::runtime_error("tensor: unknown element type");
  const auto rank = get<std::uint8_t>(in);
  if (rank == 0 || rank > kMaxRank) throw std::runtime_error("tensor: invalid rank");

  Tensor t;
  t.type = static_cast<Tensor::Type>(type_code);
  t.shape.resize(rank);
  for (auto& d : t.shape) {
    d = get<std::uint64_t>(in);
    if (d == 0) throw std::runtime_error("tensor: zero-length axis");
  }
  const std::uint64_t count = t.element_count();

  if (t.type == Tensor::Type::Float64) {
    t.f64.resize(count);
    in.read(reinterpret_cast<char*>(t.f64.data()),
            static_cast<std::streamsize>(count * sizeof(double)));
    if (!in) throw std::runtime_error("tensor: truncated payload");
  } else {
    const std::uint64_t row = t.shape.back();
    const std::uint64_t rows = count / row;
    const std::uint64_t row_bytes = (row + 7) / 8;
    t.bit.resize(count);
    std::vector<std::uint8_t> packed(row_bytes);
    for (std::uint64_t r = 0; r < rows; ++r) {
      in.read(reinterpret_cast<char*>(packed.data()), static_cast<std::streamsize>(row_bytes));
      if (!in) throw std::runtime_error("tensor: truncated payload");
      for (std::uint64_t i = 0; i < row; ++i)
        t.bit[r * row + i] = (packed[i / 8] >> (i % 8)) & 1u;
    }
  }
  return t;
}

void write_tensor(const Tensor& t, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("tensor: cannot open " + path + " for writing");
  write_tensor(t, out);
}

Tensor read_tensor(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("tensor: cannot open " + path);
  return read_tensor(in);
}

}  // namespace jot
