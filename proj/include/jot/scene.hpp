#pragma once

#include <cstdint>
#include <string>

#include "jot/image.hpp"

namespace jot {

/// Deterministic piecewise-smooth test scene in [0, range_max]: a shaded
/// ramp, a few soft blobs and a couple of hard-edged plateaus.
Image make_test_scene(int width, int height, double range_max, std::uint64_t seed);

/// Scene sources accepted by the pipeline:
///   "synthetic:<W>x<H>:<seed>"  - make_test_scene scaled to [0, range_max]
///   "*.pgm"                     - binary PGM rescaled to [0, range_max]
///   anything else               - float64 rank-2 tensor container, used as is
Image load_scene(const std::string& source, double range_max);

}  // namespace jot
