#include "jot/patches.hpp"

#include <stdexcept>

namespace jot {
namespace {

std::vector<int> grid_axis(int extent, int patch, int stride) {
  std::vector<int> pos;
  for (int p = 0; p + patch <= extent; p += stride) pos.push_back(p);
  if (pos.empty() || pos.back() != extent - patch) pos.push_back(extent - patch);
  return pos;
}

}  // namespace

PatchGrid::PatchGrid(int w, int h, int patch_side, int step)
    : image_w(w), image_h(h), patch(patch_side), stride(step) {
  if (patch_side < 1) throw std::invalid_argument("PatchGrid: patch side must be >= 1");
  if (step < 1 || step > patch_side)
    throw std::invalid_argument("PatchGrid: stride must be in [1, patch_side]");
  if (w < patch_side || h < patch_side)
    throw std::invalid_argument("PatchGrid: image smaller than patch");
  xs_ = grid_axis(w, patch_side, step);
  ys_ = grid_axis(h, patch_side, step);
}

std::vector<Image> extract_patches(const Image& img, const PatchGrid& grid) {
  if (img.width != grid.image_w || img.height != grid.image_h)
    throw std::invalid_argument("extract_patches: image/grid mismatch");
  std::vector<Image> patches;
  patches.reserve(grid.count());
  for (std::size_t i = 0; i < grid.count(); ++i) {
    const auto [x0, y0] = grid.position(i);
    patches.push_back(crop(img, x0, y0, grid.patch, grid.patch));
  }
  return patches;
}

Image aggregate_patches(const std::vector<Image>& patches, const PatchGrid& grid) {
  if (patches.size() != grid.count())
    throw std::invalid_argument("aggregate_patches: patch count mismatch");
  Image sum(grid.image_w, grid.image_h, 0.0);
  Image cover(grid.image_w, grid.image_h, 0.0);
  for (std::size_t i = 0; i < grid.count(); ++i) {
    const auto [x0, y0] = grid.position(i);
    const Image& p = patches[i];
    if (p.width != grid.patch || p.height != grid.patch)
      throw std::invalid_argument("aggregate_patches: wrong patch size");
    for (int y = 0; y < grid.patch; ++y)
      for (int x = 0; x < grid.patch; ++x) {
        sum.at(x0 + x, y0 + y) += p.at(x, y);
        cover.at(x0 + x, y0 + y) += 1.0;
      }
  }
  for (std::size_t j = 0; j < sum.size(); ++j) sum.v[j] /= cover.v[j];
  return sum;
}

Image coverage_counts(const PatchGrid& grid) {
  Image cover(grid.image_w, grid.image_h, 0.0);
  for (std::size_t i = 0; i < grid.count(); ++i) {
    const auto [x0, y0] = grid.position(i);
    for (int y = 0; y < grid.patch; ++y)
      for (int x = 0; x < grid.patch; ++x) cover.at(x0 + x, y0 + y) += 1.0;
  }
  return cover;
}

}  // namespace jot
