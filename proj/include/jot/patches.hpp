#pragma once

#include <vector>

#include "jot/image.hpp"

namespace jot {

/// Regular grid of square patch positions. The last row/column is clamped to
/// the image border when the stride does not tile exactly, so every pixel is
/// covered.
struct PatchGrid {
  int image_w = 0;
  int image_h = 0;
  int patch = 0;
  int stride = 0;

  PatchGrid(int w, int h, int patch_side, int step);

  const std::vector<int>& xs() const { return xs_; }
  const std::vector<int>& ys() const { return ys_; }
  std::size_t count() const { return xs_.size() * ys_.size(); }

  /// Position of patch index i (row-major over (ys, xs)).
  std::pair<int, int> position(std::size_t i) const {
    return {xs_[i % xs_.size()], ys_[i / xs_.size()]};
  }

 private:
  std::vector<int> xs_, ys_;
};

std::vector<Image> extract_patches(const Image& img, const PatchGrid& grid);

/// Sum patches back into the image and divide by per-pixel coverage counts.
/// Exact inverse of extract_patches when stride == patch.
Image aggregate_patches(const std::vector<Image>& patches, const PatchGrid& grid);

/// Per-pixel count of covering patches.
Image coverage_counts(const PatchGrid& grid);

}  // namespace jot
