#include "jot/dictionary.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "jot/tensor.hpp"

namespace jot {

std::vector<double> Dictionary::multiply(const std::vector<double>& z) const {
  if (z.size() != static_cast<std::size_t>(atom_count))
    throw std::invalid_argument("Dictionary: code length mismatch");
  std::vector<double> out(atom_dim, 0.0);
  for (int i = 0; i < atom_dim; ++i) {
    const double* row = &a[static_cast<std::size_t>(i) * atom_count];
    double acc = 0.0;
    for (int j = 0; j < atom_count; ++j) acc += row[j] * z[j];
    out[i] = acc;
  }
  return out;
}

std::vector<double> Dictionary::multiply_transpose(const std::vector<double>& v) const {
  if (v.size() != static_cast<std::size_t>(atom_dim))
    throw std::invalid_argument("Dictionary: patch length mismatch");
  std::vector<double> out(atom_count, 0.0);
  for (int i = 0; i < atom_dim; ++i) {
    const double* row = &a[static_cast<std::size_t>(i) * atom_count];
    const double vi = v[i];
    for (int j = 0; j < atom_count; ++j) out[j] += row[j] * vi;
  }
  return out;
}

void validate(const Dictionary& d) {
  if (d.patch_side < 1 || d.atom_dim != d.patch_side * d.patch_side || d.atom_count < 1)
    throw std::invalid_argument("Dictionary: inconsistent dimensions");
  if (d.a.size() != static_cast<std::size_t>(d.atom_dim) * d.atom_count)
    throw std::invalid_argument("Dictionary: storage size mismatch");
  for (int j = 0; j < d.atom_count; ++j) {
    double norm2 = 0.0;
    for (int i = 0; i < d.atom_dim; ++i) norm2 += d.at(i, j) * d.at(i, j);
    if (std::fabs(std::sqrt(norm2) - 1.0) > 1e-8)
      throw std::invalid_argument("Dictionary: atom not unit norm");
  }
}

Dictionary make_dct_dictionary(int patch_side, int atoms_per_axis) {
  if (patch_side < 1) throw std::invalid_argument("make_dct_dictionary: patch_side must be >= 1");
  if (atoms_per_axis < patch_side)
    throw std::invalid_argument("make_dct_dictionary: atoms_per_axis must be >= patch_side");

  // Unit-norm 1-D cosine atoms sampled at the patch grid; frequency 0 is the
  // constant vector, so the square case reduces to the orthonormal DCT-II.
  const int p = patch_side, f_count = atoms_per_axis;
  std::vector<std::vector<double>> basis(f_count, std::vector<double>(p));
  for (int f = 0; f < f_count; ++f) {
    double norm2 = 0.0;
    for (int t = 0; t < p; ++t) {
      const double v = std::cos(M_PI * f * (2.0 * t + 1.0) / (2.0 * f_count));
      basis[f][t] = v;
      norm2 += v * v;
    }
    const double inv = 1.0 / std::sqrt(norm2);
    for (int t = 0; t < p; ++t) basis[f][t] *= inv;
  }

  Dictionary d;
  d.patch_side = p;
  d.atom_dim = p * p;
  d.atom_count = f_count * f_count;
  d.a.resize(static_cast<std::size_t>(d.atom_dim) * d.atom_count);
  for (int fy = 0; fy < f_count; ++fy)
    for (int fx = 0; fx < f_count; ++fx) {
      const int j = fy * f_count + fx;
      for (int y = 0; y < p; ++y)
        for (int x = 0; x < p; ++x) d.at(y * p + x, j) = basis[fy][y] * basis[fx][x];
    }
  validate(d);
  return d;
}

Dictionary load_dictionary(const std::string& path) {
  Tensor t = read_tensor(path);
  if (t.type != Tensor::Type::Float64)
    throw std::runtime_error("load_dictionary: expected a float64 tensor");
  if (t.shape.size() != 2) throw std::runtime_error("load_dictionary: expected rank 2");
  const int n = static_cast<int>(t.shape[0]);
  const int m = static_cast<int>(t.shape[1]);
  const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
  if (side * side != n)
    throw std::runtime_error("load_dictionary: atom dimension is not a perfect square");

  Dictionary d;
  d.patch_side = side;
  d.atom_dim = n;
  d.atom_count = m;
  d.a = std::move(t.f64);

  for (int j = 0; j < m; ++j) {
    double norm2 = 0.0;
    for (int i = 0; i < n; ++i) norm2 += d.at(i, j) * d.at(i, j);
    const double norm = std::sqrt(norm2);
    if (!(norm > 0.0))
      throw std::runtime_error("load_dictionary: zero atom " + std::to_string(j));
    if (std::fabs(norm - 1.0) > 1e-8) {
      std::fprintf(stderr, "load_dictionary: atom %d has norm %.6g, renormalizing\n", j, norm);
      for (int i = 0; i < n; ++i) d.at(i, j) /= norm;
    }
  }
  validate(d);
  return d;
}

void save_dictionary(const Dictionary& d, const std::string& path) {
  validate(d);
  Tensor t;
  t.type = Tensor::Type::Float64;
  t.shape = {static_cast<std::uint64_t>(d.atom_dim), static_cast<std::uint64_t>(d.atom_count)};
  t.f64 = d.a;
  write_tensor(t, path);
}

}  // namespace jot
