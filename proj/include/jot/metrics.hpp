#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>

#include "jot/image.hpp"

namespace jot {

inline double mse(const Image& a, const Image& b) {
  if (!a.same_shape(b)) throw std::invalid_argument("mse: shape mismatch");
  if (a.size() == 0) throw std::invalid_argument("mse: empty image");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.v.size(); ++i) {
    const double d = a.v[i] - b.v[i];
    acc += d * d;
  }
  return acc / static_cast<double>(a.size());
}

/// 10 log10(peak^2 / mse); +infinity for identical images.
inline double psnr(const Image& estimate, const Image& reference, double peak) {
  if (!(peak > 0.0)) throw std::invalid_argument("psnr: peak must be > 0");
  const double err = mse(estimate, reference);
  if (err == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(peak * peak / err);
}

/// PSNR on log(1+.) intensities with peak log(1+range_max).
inline double log_psnr(const Image& estimate, const Image& reference, double range_max) {
  if (!(range_max > 0.0)) throw std::invalid_argument("log_psnr: range must be > 0");
  if (!estimate.same_shape(reference)) throw std::invalid_argument("log_psnr: shape mismatch");
  Image le(estimate.width, estimate.height), lr(reference.width, reference.height);
  for (std::size_t i = 0; i < le.v.size(); ++i) {
    if (estimate.v[i] < 0.0 || reference.v[i] < 0.0)
      throw std::invalid_argument("log_psnr: negative intensity");
    le.v[i] = std::log1p(estimate.v[i]);
    lr.v[i] = std::log1p(reference.v[i]);
  }
  return psnr(le, lr, std::log1p(range_max));
}

}  // namespace jot
