#include "jot/scene.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "jot/pgm.hpp"
#include "jot/rng.hpp"
#include "jot/tensor.hpp"

namespace jot {

Image make_test_scene(int width, int height, double range_max, std::uint64_t seed) {
  if (width < 1 || height < 1) throw std::invalid_argument("make_test_scene: bad dimensions");
  if (!(range_max > 0.0)) throw std::invalid_argument("make_test_scene: range must be > 0");

  CounterRng rng = CounterRng::keyed(seed, 0x7363656E65ull /* "scene" */, 0);
  Image img(width, height);

  // Shaded ramp background.
  const double gx = rng.next_unit() - 0.5;
  const double gy = rng.next_unit() - 0.5;
  const double base = 0.2 + 0.2 * rng.next_unit();
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) {
      const double fx = static_cast<double>(x) / width - 0.5;
      const double fy = static_cast<double>(y) / height - 0.5;
      img.at(x, y) = base + 0.3 * (gx * fx + gy * fy);
    }

  // Soft blobs.
  const int blobs = 3 + static_cast<int>(rng.next_below(4));
  for (int b = 0; b < blobs; ++b) {
    const double cx = rng.next_unit() * width;
    const double cy = rng.next_unit() * height;
    const double s = (0.06 + 0.18 * rng.next_unit()) * std::min(width, height);
    const double amp = (rng.next_unit() < 0.3 ? -0.35 : 0.65) * (0.4 + 0.6 * rng.next_unit());
    for (int y = 0; y < height; ++y)
      for (int x = 0; x < width; ++x) {
        const double dx = x - cx, dy = y - cy;
        img.at(x, y) += amp * std::exp(-(dx * dx + dy * dy) / (2.0 * s * s));
      }
  }

  // Hard-edged plateaus.
  const int boxes = 1 + static_cast<int>(rng.next_below(2));
  for (int b = 0; b < boxes; ++b) {
    const int bw = std::max(2, static_cast<int>(rng.next_below(width / 3 + 1)));
    const int bh = std::max(2, static_cast<int>(rng.next_below(height / 3 + 1)));
    const int bx = static_cast<int>(rng.next_below(std::max(1, width - bw)));
    const int by = static_cast<int>(rng.next_below(std::max(1, height - bh)));
    const double amp = (rng.next_unit() < 0.5 ? -0.25 : 0.45);
    for (int y = by; y < by + bh && y < height; ++y)
      for (int x = bx; x < bx + bw && x < width; ++x) img.at(x, y) += amp;
  }

  double lo = img.v[0], hi = img.v[0];
  for (double v : img.v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const double span = std::max(hi - lo, 1e-9);
  for (double& v : img.v) v = (v - lo) / span * range_max;
  return img;
}

Image load_scene(const std::string& source, double range_max) {
  if (!(range_max > 0.0)) throw std::invalid_argument("load_scene: range must be > 0");
  if (source.rfind("synthetic:", 0) == 0) {
    // synthetic:<W>x<H>:<seed>
    const std::string desc = source.substr(10);
    const auto x_pos = desc.find('x');
    const auto colon = desc.find(':', x_pos == std::string::npos ? 0 : x_pos);
    if (x_pos == std::string::npos || colon == std::string::npos)
      throw std::invalid_argument("load_scene: expected synthetic:<W>x<H>:<seed>");
    const int w = std::stoi(desc.substr(0, x_pos));
    const int h = std::stoi(desc.substr(x_pos + 1, colon - x_pos - 1));
    const std::uint64_t seed = std::stoull(desc.substr(colon + 1));
    return make_test_scene(w, h, range_max, seed);
  }
  if (source.size() >= 4 && source.substr(source.size() - 4) == ".pgm") {
    const PgmImage pgm = read_pgm(source);
    Image img = pgm.pixels;
    for (double& v : img.v) v = v / pgm.maxval * range_max;
    return img;
  }
  Tensor t = read_tensor(source);
  if (t.type != Tensor::Type::Float64 || t.shape.size() != 2)
    throw std::runtime_error("load_scene: expected a rank-2 float64 tensor: " + source);
  Image img(static_cast<int>(t.shape[1]), static_cast<int>(t.shape[0]));
  img.v = std::move(t.f64);
  require_finite_nonnegative(img, "load_scene");
  return img;
}

}  // namespace jot
