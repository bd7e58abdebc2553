#pragma once

#include <vector>

#include "jot/frames.hpp"
#include "jot/image.hpp"
#include "jot/mlnet.hpp"
#include "jot/patches.hpp"
#include "jot/solvers.hpp"

namespace jot {

enum class Method { Ml, Ista, Fista, Mlnet };

Method method_from_name(const std::string& name);
std::string method_name(Method m);

struct ReconstructConfig {
  Method method = Method::Fista;
  SolverConfig solver;   // regularized paths
  MlConfig ml;           // unregularized path
  int patch = 8;
  int stride = 8;
  double c = 10.0;
  int mlnet_layers = -1;  // override T when >= 0
  int threads = 1;
};

struct ReconstructResult {
  Image image;                        // low-resolution estimate
  std::vector<SolverReport> patch_reports;
  SolverReport merged;                // objective-vs-iteration curve
};

/// Reconstruct the low-resolution image from a stack of binary frames.
/// The unregularized ML path solves the whole image at once; the regularized
/// and network paths solve patch-aligned sensor regions independently and
/// average overlapping patches. Deterministic for any thread count.
ReconstructResult reconstruct_image(const BitSummary& bits, const SensingOperator& op,
                                    const Dictionary* dict, const MLNetParams* net,
                                    const ReconstructConfig& cfg);

}  // namespace jot
