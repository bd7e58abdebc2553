#include "jot/pgm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace jot {
namespace {

int next_token(std::istream& in) {
  // Skip whitespace and '#' comment lines, then read one integer.
  for (;;) {
    int ch = in.peek();
    if (ch == '#') {
      std::string line;
      std::getline(in, line);
    } else if (std::isspace(ch)) {
      in.get();
    } else {
      break;
    }
  }
  int value = 0;
  if (!(in >> value)) throw std::runtime_error("pgm: malformed header");
  return value;
}

}  // namespace

PgmImage read_pgm(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("pgm: cannot open " + path);
  char m0 = 0, m1 = 0;
  in.get(m0);
  in.get(m1);
  if (m0 != 'P' || m1 != '5') throw std::runtime_error("pgm: not a binary PGM (P5): " + path);

  const int width = next_token(in);
  const int height = next_token(in);
  const int maxval = next_token(in);
  if (width < 1 || height < 1 || maxval < 1 || maxval > 65535)
    throw std::runtime_error("pgm: invalid header in " + path);
  in.get();  // single whitespace after maxval

  PgmImage out;
  out.maxval = maxval;
  out.pixels = Image(width, height);
  const bool wide = maxval > 255;
  std::vector<unsigned char> row(static_cast<std::size_t>(width) * (wide ? 2 : 1));
  for (int y = 0; y < height; ++y) {
    in.read(reinterpret_cast<char*>(row.data()), static_cast<std::streamsize>(row.size()));
    if (!in) throw std::runtime_error("pgm: truncated pixel data in " + path);
    for (int x = 0; x < width; ++x) {
      const double v = wide ? row[2 * x] * 256.0 + row[2 * x + 1] : row[x];
      out.pixels.at(x, y) = v;
    }
  }
  return out;
}

void write_pgm(const Image& img, int maxval, const std::string& path) {
  if (maxval < 1 || maxval > 65535) throw std::invalid_argument("pgm: maxval out of range");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("pgm: cannot open " + path + " for writing");
  out << "P5\n" << img.width << " " << img.height << "\n" << maxval << "\n";
  const bool wide = maxval > 255;
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      const long v = std::lround(std::clamp(img.at(x, y), 0.0, static_cast<double>(maxval)));
      if (wide) {
        out.put(static_cast<char>((v >> 8) & 0xFF));
        out.put(static_cast<char>(v & 0xFF));
      } else {
        out.put(static_cast<char>(v & 0xFF));
      }
    }
  }
  if (!out) throw std::runtime_error("pgm: write failed for " + path);
}

}  // namespace jot
