#pragma once

#include <string>

#include "jot/image.hpp"

namespace jot {

/// Binary PGM (P5), 8- or 16-bit. Values are returned raw in [0, maxval].
struct PgmImage {
  Image pixels;
  int maxval = 255;
};

PgmImage read_pgm(const std::string& path);

/// Writes 8-bit when maxval <= 255, 16-bit (big-endian) otherwise. Values are
/// clamped to [0, maxval] and rounded.
void write_pgm(const Image& img, int maxval, const std::string& path);

}  // namespace jot
