#pragma once

#include <cstdint>
#include <vector>

#include "jot/image.hpp"
#include "jot/pattern.hpp"

namespace jot {

/// K binary frames plus the per-pixel threshold map they were acquired with.
struct BinaryFrameStack {
  int width = 0;
  int height = 0;
  int frames = 0;
  std::vector<std::uint8_t> bits;        // frames*height*width, values 0/1
  std::vector<std::int64_t> threshold;   // height*width

  std::uint8_t bit(int x, int y, int k) const {
    return bits[(static_cast<std::size_t>(k) * height + y) * width + x];
  }
  std::int64_t threshold_at(int x, int y) const {
    return threshold[static_cast<std::size_t>(y) * width + x];
  }
};

/// Per-pixel sufficient statistics: the likelihood depends on the frames only
/// through the count of ones (and K). Counts are kept as doubles; they are
/// exact integers far below 2^53.
struct BitSummary {
  int width = 0;
  int height = 0;
  double frames = 0;
  std::vector<double> ones;       // n1 per pixel
  std::vector<double> threshold;  // q per pixel

  std::size_t size() const { return ones.size(); }
};

/// Draw K independent binary frames: bit = 1 iff a fresh Poisson(rate) draw
/// reaches the pixel threshold. Each (pixel, frame) uses its own counter
/// stream keyed by (seed, pixel, frame), so the result is reproducible and
/// independent of evaluation order.
BinaryFrameStack sample_binary_frames(const Image& rate, const ThresholdPattern& pattern,
                                      int frames, std::uint64_t seed);

/// Concatenate stacks along the frame axis. Dimensions and threshold maps
/// must match.
BinaryFrameStack stack_exposures(const std::vector<BinaryFrameStack>& stacks);

BitSummary summarize(const BinaryFrameStack& stack);
BitSummary crop(const BitSummary& s, int x0, int y0, int w, int h);

}  // namespace jot
