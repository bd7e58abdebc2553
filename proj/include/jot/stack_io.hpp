#pragma once

#include <map>
#include <string>
#include <vector>

#include "jot/frames.hpp"
#include "jot/image.hpp"
#include "jot/mlnet.hpp"

namespace jot {

using Manifest = std::map<std::string, std::string>;

/// Simulation outputs live under a common prefix:
///   <prefix>.gt.btsr      low-resolution ground truth (float64 [h, w])
///   <prefix>.rates.btsr   high-resolution rate image  (float64 [H, W])
///   <prefix>.bits.btsr    binary stack                (bits    [K, H, W])
///   <prefix>.qmap.btsr    threshold map               (float64 [H, W])
///   <prefix>.manifest.txt key=value provenance incl. the seed
void write_stack_files(const std::string& prefix, const BinaryFrameStack& stack,
                       const Image& rates, const Image& ground_truth,
                       const Manifest& manifest);

struct StackFiles {
  BinaryFrameStack stack;
  Image rates;
  Image ground_truth;
  Manifest manifest;
};
StackFiles read_stack_files(const std::string& prefix);

Manifest read_manifest(const std::string& path);
void write_manifest(const Manifest& m, const std::string& path);

/// Dataset directory: manifest.txt plus
///   gt.btsr    float64 [N, p, p]
///   bits.btsr  bits    [N, K, p*s, p*s]
///   qmaps.btsr float64 [N, p*s, p*s]
void write_dataset(const std::string& dir, const std::vector<TrainSample>& samples,
                   const Manifest& manifest);

struct Dataset {
  std::vector<TrainSample> samples;
  Manifest manifest;
};
Dataset read_dataset(const std::string& dir);

/// Image containers (float64 rank 2).
void write_image_tensor(const Image& img, const std::string& path);
Image read_image_tensor(const std::string& path);

}  // namespace jot
