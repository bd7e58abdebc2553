#pragma once

#include <memory>
#include <vector>

#include "jot/image.hpp"

namespace jot {

/// The optical forward operator H: nearest-neighbour upsampling by an integer
/// factor (no intensity rescaling) followed by a normalized Gaussian blur with
/// replicate boundary handling. Linear, constant preserving, and paired with
/// an exact adjoint.
///
/// For small inputs (patch-sized problems) the operator memoizes a dense
/// matrix realization per input size and applies it as two contiguous
/// matrix-vector passes; copies share the cache.
class SensingOperator {
 public:
  /// sigma is in high-resolution pixels; the kernel is truncated at radius
  /// ceil(truncation_sigmas * sigma) and renormalized to sum 1.
  SensingOperator(int upsampling, double sigma, int truncation_sigmas = 4);
  SensingOperator(const SensingOperator&) = default;
  SensingOperator& operator=(const SensingOperator&) = default;

  /// s = 1 with a degenerate kernel: apply and adjoint are exact identities.
  static SensingOperator identity();

  int upsampling() const { return upsampling_; }
  double sigma() const { return sigma_; }
  int kernel_radius() const { return radius_; }
  const std::vector<double>& kernel() const { return kernel_; }

  /// lambda = H x. Output is (width*s) x (height*s); rejects non-finite input.
  Image apply(const Image& x) const;

  /// H^T y. Input dimensions must be divisible by s.
  Image apply_adjoint(const Image& y) const;

 private:
  // Per-size realization as interval runs: the blur support is a rectangle,
  // so each row's nonzeros form short runs of consecutive columns and the
  // inner products stay contiguous.
  struct SparseMatrix {
    std::vector<std::size_t> row_start;  // index into runs, rows + 1
    std::vector<int> run_col;            // first column of each run
    std::vector<int> run_len;
    std::vector<std::size_t> run_val;    // index into val
    std::vector<double> val;
  };
  struct DenseForm {
    int low_w = 0, low_h = 0;
    SparseMatrix fwd;  // n_s x n
    SparseMatrix adj;  // n x n_s (exact transpose)
  };
  struct DenseCache;

  int upsampling_;
  double sigma_;
  int radius_;
  std::vector<double> kernel_;  // 1-D taps, length 2*radius+1, sum 1
  std::shared_ptr<DenseCache> cache_;

  Image apply_separable(const Image& x) const;
  Image apply_adjoint_separable(const Image& y) const;
  std::shared_ptr<const DenseForm> dense_for(int low_w, int low_h) const;

  void blur_rows(Image& img) const;
  void blur_cols(Image& img) const;
  void blur_rows_adjoint(Image& img) const;
  void blur_cols_adjoint(Image& img) const;
};

}  // namespace jot
