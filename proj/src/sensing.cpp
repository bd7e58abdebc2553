#include "jot/sensing.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <mutex>
#include <stdexcept>

namespace jot {
namespace {

int clamp_index(int i, int n) { return std::clamp(i, 0, n - 1); }

// Dense realizations pay off only for patch-sized problems.
constexpr int kDenseMaxLowPixels = 256;

}  // namespace

struct SensingOperator::DenseCache {
  std::mutex mutex;
  std::vector<std::shared_ptr<const DenseForm>> forms;
};

SensingOperator::SensingOperator(int upsampling, double sigma, int truncation_sigmas)
    : upsampling_(upsampling), sigma_(sigma), cache_(std::make_shared<DenseCache>()) {
  if (upsampling < 1) throw std::invalid_argument("SensingOperator: upsampling must be >= 1");
  if (!(sigma > 0.0)) throw std::invalid_argument("SensingOperator: sigma must be > 0");
  if (truncation_sigmas < 1)
    throw std::invalid_argument("SensingOperator: truncation must be >= 1 sigma");

  radius_ = static_cast<int>(std::ceil(truncation_sigmas * sigma));
  kernel_.assign(2 * radius_ + 1, 0.0);
  double sum = 0.0;
  for (int t = -radius_; t <= radius_; ++t) {
    const double w = std::exp(-0.5 * (t * t) / (sigma * sigma));
    kernel_[t + radius_] = w;
    sum += w;
  }
  for (double& w : kernel_) w /= sum;
  // Drop taps that underflowed to exactly zero so a vanishing sigma becomes a
  // true delta kernel.
  while (radius_ > 0 && kernel_.front() == 0.0 && kernel_.back() == 0.0) {
    kernel_.erase(kernel_.begin());
    kernel_.pop_back();
    --radius_;
  }
}

SensingOperator SensingOperator::identity() { return SensingOperator(1, 1e-4); }

void SensingOperator::blur_rows(Image& img) const {
  if (radius_ == 0) return;
  std::vector<double> row(img.width);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) row[x] = img.at(x, y);
    for (int x = 0; x < img.width; ++x) {
      double acc = 0.0;
      for (int t = -radius_; t <= radius_; ++t)
        acc += kernel_[t + radius_] * row[clamp_index(x + t, img.width)];
      img.at(x, y) = acc;
    }
  }
}

void SensingOperator::blur_cols(Image& img) const {
  if (radius_ == 0) return;
  std::vector<double> col(img.height);
  for (int x = 0; x < img.width; ++x) {
    for (int y = 0; y < img.height; ++y) col[y] = img.at(x, y);
    for (int y = 0; y < img.height; ++y) {
      double acc = 0.0;
      for (int t = -radius_; t <= radius_; ++t)
        acc += kernel_[t + radius_] * col[clamp_index(y + t, img.height)];
      img.at(x, y) = acc;
    }
  }
}

void SensingOperator::blur_rows_adjoint(Image& img) const {
  if (radius_ == 0) return;
  std::vector<double> acc(img.width);
  for (int y = 0; y < img.height; ++y) {
    std::fill(acc.begin(), acc.end(), 0.0);
    for (int x = 0; x < img.width; ++x) {
      const double val = img.at(x, y);
      for (int t = -radius_; t <= radius_; ++t)
        acc[clamp_index(x + t, img.width)] += kernel_[t + radius_] * val;
    }
    for (int x = 0; x < img.width; ++x) img.at(x, y) = acc[x];
  }
}

void SensingOperator::blur_cols_adjoint(Image& img) const {
  if (radius_ == 0) return;
  std::vector<double> acc(img.height);
  for (int x = 0; x < img.width; ++x) {
    std::fill(acc.begin(), acc.end(), 0.0);
    for (int y = 0; y < img.height; ++y) {
      const double val = img.at(x, y);
      for (int t = -radius_; t <= radius_; ++t)
        acc[clamp_index(y + t, img.height)] += kernel_[t + radius_] * val;
    }
    for (int y = 0; y < img.height; ++y) img.at(x, y) = acc[y];
  }
}

Image SensingOperator::apply_separable(const Image& x) const {
  const int s = upsampling_;
  Image hi(x.width * s, x.height * s);
  for (int y = 0; y < hi.height; ++y)
    for (int xx = 0; xx < hi.width; ++xx) hi.at(xx, y) = x.at(xx / s, y / s);
  blur_rows(hi);
  blur_cols(hi);
  return hi;
}

Image SensingOperator::apply_adjoint_separable(const Image& y) const {
  const int s = upsampling_;
  Image hi = y;
  blur_cols_adjoint(hi);
  blur_rows_adjoint(hi);
  Image out(y.width / s, y.height / s, 0.0);
  for (int yy = 0; yy < hi.height; ++yy)
    for (int xx = 0; xx < hi.width; ++xx) out.at(xx / s, yy / s) += hi.at(xx, yy);
  return out;
}

std::shared_ptr<const SensingOperator::DenseForm> SensingOperator::dense_for(
    int low_w, int low_h) const {
  if (low_w * low_h > kDenseMaxLowPixels) return nullptr;
  {
    std::lock_guard<std::mutex> lock(cache_->mutex);
    for (const auto& f : cache_->forms)
      if (f->low_w == low_w && f->low_h == low_h) return f;
  }
  // Assemble outside the lock: column j is the separable operator applied to
  // the j-th basis image. Exact zeros are dropped, which leaves the row sums
  // bit-identical to the dense accumulation order.
  auto form = std::make_shared<DenseForm>();
  form->low_w = low_w;
  form->low_h = low_h;
  const int n = low_w * low_h;
  const int ns = n * upsampling_ * upsampling_;
  std::vector<std::vector<double>> cols(n);
  Image basis(low_w, low_h, 0.0);
  for (int j = 0; j < n; ++j) {
    basis.v[j] = 1.0;
    cols[j] = apply_separable(basis).v;
    basis.v[j] = 0.0;
  }
  auto build = [](SparseMatrix& m, int rows, int cols_n,
                  const std::function<double(int, int)>& entry) {
    m.row_start.assign(rows + 1, 0);
    for (int i = 0; i < rows; ++i) {
      m.row_start[i] = m.run_col.size();
      int j = 0;
      while (j < cols_n) {
        if (entry(i, j) == 0.0) {
          ++j;
          continue;
        }
        const int start = j;
        m.run_col.push_back(start);
        m.run_val.push_back(m.val.size());
        while (j < cols_n && entry(i, j) != 0.0) m.val.push_back(entry(i, j++));
        m.run_len.push_back(j - start);
      }
    }
    m.row_start[rows] = m.run_col.size();
  };
  build(form->fwd, ns, n, [&](int i, int j) { return cols[j][i]; });
  build(form->adj, n, ns, [&](int j, int i) { return cols[j][i]; });

  std::lock_guard<std::mutex> lock(cache_->mutex);
  for (const auto& f : cache_->forms)
    if (f->low_w == low_w && f->low_h == low_h) return f;
  cache_->forms.push_back(form);
  return form;
}

Image SensingOperator::apply(const Image& x) const {
  require_finite(x, "SensingOperator::apply");
  if (const auto dense = dense_for(x.width, x.height)) {
    const int s = upsampling_;
    Image out(x.width * s, x.height * s);
    const SparseMatrix& m = dense->fwd;
    const std::size_t rows = m.row_start.size() - 1;
    for (std::size_t i = 0; i < rows; ++i) {
      double acc = 0.0;
      for (std::size_t r = m.row_start[i]; r < m.row_start[i + 1]; ++r) {
        const double* v = &m.val[m.run_val[r]];
        const double* xs = &x.v[m.run_col[r]];
        const int len = m.run_len[r];
        for (int k = 0; k < len; ++k) acc += v[k] * xs[k];
      }
      out.v[i] = acc;
    }
    return out;
  }
  return apply_separable(x);
}

Image SensingOperator::apply_adjoint(const Image& y) const {
  require_finite(y, "SensingOperator::apply_adjoint");
  const int s = upsampling_;
  if (y.width % s != 0 || y.height % s != 0)
    throw std::invalid_argument("SensingOperator::apply_adjoint: dimensions not divisible by s");
  const int low_w = y.width / s;
  const int low_h = y.height / s;
  if (const auto dense = dense_for(low_w, low_h)) {
    Image out(low_w, low_h);
    const SparseMatrix& m = dense->adj;
    const std::size_t rows = m.row_start.size() - 1;
    for (std::size_t i = 0; i < rows; ++i) {
      double acc = 0.0;
      for (std::size_t r = m.row_start[i]; r < m.row_start[i + 1]; ++r) {
        const double* v = &m.val[m.run_val[r]];
        const double* ys = &y.v[m.run_col[r]];
        const int len = m.run_len[r];
        for (int k = 0; k < len; ++k) acc += v[k] * ys[k];
      }
      out.v[i] = acc;
    }
    return out;
  }
  return apply_adjoint_separable(y);
}

}  // namespace jot
