#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "jot/image.hpp"

namespace jot {

/// Periodic tile of positive integer comparison thresholds. The threshold at
/// absolute pixel (x,y) is tile[(y mod tile_h), (x mod tile_w)].
struct ThresholdPattern {
  int tile_w = 0;
  int tile_h = 0;
  std::vector<std::int64_t> q;  // row-major tile, each >= 1

  std::int64_t at(int x, int y) const {
    return q[static_cast<std::size_t>(y % tile_h) * tile_w + (x % tile_w)];
  }
};

void validate(const ThresholdPattern& p);

/// Tile with the levels {q_min..q_max} spread as evenly as the cell count
/// allows (each level appears floor or ceil of cells/levels times), placed by
/// a seeded permutation.
ThresholdPattern make_uniform_pattern(int tile_w, int tile_h, std::int64_t q_min,
                                      std::int64_t q_max, std::uint64_t seed);

/// Greedy covering of [0, lambda_max] by the informative intervals
/// [q - 2*sqrt(q), q + 2*sqrt(q)]: starting from q = 1, each next threshold is
/// the largest whose interval still overlaps the previous one.
std::vector<std::int64_t> hdr_covering_thresholds(double lambda_max);

/// HDR tile: the covering thresholds for [0, lambda_max], with any surplus
/// cells filled by re-running the covering on the lowest decade
/// [0, lambda_max/10]. Placement is a fixed deterministic permutation.
ThresholdPattern make_hdr_pattern(double lambda_max, int tile_side);

/// Expand the periodic tile into a full-size per-pixel threshold map.
std::vector<std::int64_t> expand_pattern(const ThresholdPattern& p, int width, int height);

/// Plain text pattern file: first line "tile_h tile_w", then row-major ints.
ThresholdPattern load_pattern(const std::string& path);
void save_pattern(const ThresholdPattern& p, const std::string& path);

}  // namespace jot
