#pragma once

#include <string>
#include <vector>

#include "jot/image.hpp"

namespace jot {

/// Column-atom dictionary mapping sparse codes to square low-resolution
/// patches. Atoms are kept at unit Euclidean norm by every constructor.
struct Dictionary {
  int patch_side = 0;  // atom_dim = patch_side^2
  int atom_dim = 0;    // n
  int atom_count = 0;  // m
  std::vector<double> a;  // row-major n x m: a[i*m + j] is component i of atom j

  double& at(int i, int j) { return a[static_cast<std::size_t>(i) * atom_count + j]; }
  double at(int i, int j) const { return a[static_cast<std::size_t>(i) * atom_count + j]; }

  /// patch = D z (length n, viewed as a patch_side x patch_side image).
  std::vector<double> multiply(const std::vector<double>& z) const;
  /// D^T v (length m).
  std::vector<double> multiply_transpose(const std::vector<double>& v) const;
};

void validate(const Dictionary& d);

/// Overcomplete 2-D separable cosine dictionary with atoms_per_axis^2 atoms;
/// orthonormal when atoms_per_axis == patch_side. Atom 0 is the constant
/// patch with entries 1/patch_side.
Dictionary make_dct_dictionary(int patch_side, int atoms_per_axis);

/// Tensor-container round trip (float64, rank 2, shape [n, m]). Loading
/// renormalizes atoms to unit norm and warns on stderr when it changes one.
Dictionary load_dictionary(const std::string& path);
void save_dictionary(const Dictionary& d, const std::string& path);

}  // namespace jot
