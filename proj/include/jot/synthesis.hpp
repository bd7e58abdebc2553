#pragma once

#include <vector>

#include "jot/dictionary.hpp"
#include "jot/image.hpp"
#include "jot/rho.hpp"
#include "jot/sensing.hpp"

namespace jot {

/// patch = rho(D z), returned as a patch_side x patch_side image. Strictly
/// positive for any finite code.
inline Image synthesize_patch(const std::vector<double>& z, const Dictionary& d, double c) {
  std::vector<double> p = d.multiply(z);
  rho_inplace(p, c);
  Image out(d.patch_side, d.patch_side);
  out.v = std::move(p);
  return out;
}

/// Sensor-domain rates for a patch: lambda = H patch.
inline Image lift_to_sensor(const Image& patch, const SensingOperator& op) {
  return op.apply(patch);
}

}  // namespace jot
