#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace jot {

/// Dense row-major 2-D grid of doubles. Used for radiant exposures, sensor
/// rates, patches and threshold maps alike.
struct Image {
  int width = 0;
  int height = 0;
  std::vector<double> v;

  Image() = default;
  Image(int w, int h, double fill = 0.0)
      : width(w), height(h), v(static_cast<std::size_t>(w) * h, fill) {
    if (w < 1 || h < 1) throw std::invalid_argument("Image: dimensions must be >= 1");
  }

  double& at(int x, int y) { return v[static_cast<std::size_t>(y) * width + x]; }
  double at(int x, int y) const { return v[static_cast<std::size_t>(y) * width + x]; }
  std::size_t size() const { return v.size(); }

  bool same_shape(const Image& o) const { return width == o.width && height == o.height; }
};

inline void require_finite(const Image& img, const std::string& what) {
  for (double x : img.v)
    if (!std::isfinite(x)) throw std::invalid_argument(what + ": non-finite value");
}

inline void require_finite_nonnegative(const Image& img, const std::string& what) {
  for (double x : img.v)
    if (!(x >= 0.0) || !std::isfinite(x))
      throw std::invalid_argument(what + ": values must be finite and >= 0");
}

inline Image crop(const Image& img, int x0, int y0, int w, int h) {
  if (x0 < 0 || y0 < 0 || x0 + w > img.width || y0 + h > img.height)
    throw std::invalid_argument("crop: region outside image");
  Image out(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) out.at(x, y) = img.at(x0 + x, y0 + y);
  return out;
}

}  // namespace jot
