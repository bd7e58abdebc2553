#include "jot/stack_io.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "jot/tensor.hpp"

namespace jot {
namespace {

Tensor image_tensor(const Image& img) {
  Tensor t;
  t.type = Tensor::Type::Float64;
  t.shape = {static_cast<std::uint64_t>(img.height), static_cast<std::uint64_t>(img.width)};
  t.f64 = img.v;
  return t;
}

Image tensor_image(Tensor t, const std::string& what) {
  if (t.type != Tensor::Type::Float64 || t.shape.size() != 2)
    throw std::runtime_error(what + ": expected a rank-2 float64 tensor");
  Image img(static_cast<int>(t.shape[1]), static_cast<int>(t.shape[0]));
  img.v = std::move(t.f64);
  return img;
}

}  // namespace

void write_image_tensor(const Image& img, const std::string& path) {
  write_tensor(image_tensor(img), path);
}

Image read_image_tensor(const std::string& path) {
  return tensor_image(read_tensor(path), path);
}

Manifest read_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("manifest: cannot open " + path);
  Manifest m;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("manifest: malformed line in " + path + ": " + line);
    m[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return m;
}

void write_manifest(const Manifest& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("manifest: cannot open " + path + " for writing");
  for (const auto& [k, v] : m) out << k << "=" << v << "\n";
  if (!out) throw std::runtime_error("manifest: write failed for " + path);
}

void write_stack_files(const std::string& prefix, const BinaryFrameStack& stack,
                       const Image& rates, const Image& ground_truth,
                       const Manifest& manifest) {
  write_image_tensor(ground_truth, prefix + ".gt.btsr");
  write_image_tensor(rates, prefix + ".rates.btsr");

  Tensor bits;
  bits.type = Tensor::Type::Bits;
  bits.shape = {static_cast<std::uint64_t>(stack.frames),
                static_cast<std::uint64_t>(stack.height),
                static_cast<std::uint64_t>(stack.width)};
  bits.bit = stack.bits;
  write_tensor(bits, prefix + ".bits.btsr");

  Image qmap(stack.width, stack.height);
  for (std::size_t j = 0; j < qmap.v.size(); ++j)
    qmap.v[j] = static_cast<double>(stack.threshold[j]);
  write_image_tensor(qmap, prefix + ".qmap.btsr");

  write_manifest(manifest, prefix + ".manifest.txt");
}

StackFiles read_stack_files(const std::string& prefix) {
  StackFiles out;
  out.ground_truth = read_image_tensor(prefix + ".gt.btsr");
  out.rates = read_image_tensor(prefix + ".rates.btsr");
  out.manifest = read_manifest(prefix + ".manifest.txt");

  Tensor bits = read_tensor(prefix + ".bits.btsr");
  if (bits.type != Tensor::Type::Bits || bits.shape.size() != 3)
    throw std::runtime_error("stack: expected a rank-3 bit tensor in " + prefix +
                             ".bits.btsr");
  out.stack.frames = static_cast<int>(bits.shape[0]);
  out.stack.height = static_cast<int>(bits.shape[1]);
  out.stack.width = static_cast<int>(bits.shape[2]);
  out.stack.bits = std::move(bits.bit);

  const Image qmap = read_image_tensor(prefix + ".qmap.btsr");
  if (qmap.width != out.stack.width || qmap.height != out.stack.height)
    throw std::runtime_error("stack: threshold map dimensions mismatch in " + prefix);
  out.stack.threshold.resize(qmap.v.size());
  for (std::size_t j = 0; j < qmap.v.size(); ++j) {
    out.stack.threshold[j] = std::llround(qmap.v[j]);
    if (out.stack.threshold[j] < 1)
      throw std::runtime_error("stack: invalid threshold in " + prefix);
  }
  return out;
}

void write_dataset(const std::string& dir, const std::vector<TrainSample>& samples,
                   const Manifest& manifest) {
  if (samples.empty()) throw std::invalid_argument("write_dataset: no samples");
  std::filesystem::create_directories(dir);
  const int p = samples.front().target.width;
  const int ps = samples.front().bits.width;
  const int frames = static_cast<int>(samples.front().bits.frames);
  const std::uint64_t n = samples.size();

  Tensor gt;
  gt.type = Tensor::Type::Float64;
  gt.shape = {n, static_cast<std::uint64_t>(p), static_cast<std::uint64_t>(p)};
  gt.f64.reserve(n * p * p);

  Tensor bits;
  bits.type = Tensor::Type::Bits;
  bits.shape = {n, static_cast<std::uint64_t>(frames), static_cast<std::uint64_t>(ps),
                static_cast<std::uint64_t>(ps)};
  bits.bit.assign(n * frames * ps * ps, 0);

  Tensor qmaps;
  qmaps.type = Tensor::Type::Float64;
  qmaps.shape = {n, static_cast<std::uint64_t>(ps), static_cast<std::uint64_t>(ps)};
  qmaps.f64.reserve(n * ps * ps);

  // The per-sample BitSummary holds counts, not frames; datasets store the
  // counts as a synthetic stack with "ones(j)" leading ones per pixel, which
  // summarizes back to the identical sufficient statistics.
  std::size_t offset = 0;
  for (const TrainSample& s : samples) {
    if (s.target.width != p || s.target.height != p || s.bits.width != ps ||
        s.bits.height != ps || static_cast<int>(s.bits.frames) != frames)
      throw std::invalid_argument("write_dataset: inhomogeneous samples");
    gt.f64.insert(gt.f64.end(), s.target.v.begin(), s.target.v.end());
    qmaps.f64.insert(qmaps.f64.end(), s.bits.threshold.begin(), s.bits.threshold.end());
    for (int k = 0; k < frames; ++k)
      for (int j = 0; j < ps * ps; ++j)
        bits.bit[offset + static_cast<std::size_t>(k) * ps * ps + j] =
            (k < static_cast<int>(s.bits.ones[j])) ? 1 : 0;
    offset += static_cast<std::size_t>(frames) * ps * ps;
  }

  write_tensor(gt, dir + "/gt.btsr");
  write_tensor(bits, dir + "/bits.btsr");
  write_tensor(qmaps, dir + "/qmaps.btsr");
  write_manifest(manifest, dir + "/manifest.txt");
}

Dataset read_dataset(const std::string& dir) {
  Dataset out;
  out.manifest = read_manifest(dir + "/manifest.txt");
  Tensor gt = read_tensor(dir + "/gt.btsr");
  Tensor bits = read_tensor(dir + "/bits.btsr");
  Tensor qmaps = read_tensor(dir + "/qmaps.btsr");
  if (gt.type != Tensor::Type::Float64 || gt.shape.size() != 3)
    throw std::runtime_error("dataset: gt.btsr must be float64 rank 3");
  if (bits.type != Tensor::Type::Bits || bits.shape.size() != 4)
    throw std::runtime_error("dataset: bits.btsr must be bits rank 4");
  if (qmaps.type != Tensor::Type::Float64 || qmaps.shape.size() != 3)
    throw std::runtime_error("dataset: qmaps.btsr must be float64 rank 3");
  const std::uint64_t n = gt.shape[0];
  if (bits.shape[0] != n || qmaps.shape[0] != n)
    throw std::runtime_error("dataset: sample count mismatch across tensors");
  const int p = static_cast<int>(gt.shape[1]);
  const int frames = static_cast<int>(bits.shape[1]);
  const int ps = static_cast<int>(bits.shape[2]);
  if (static_cast<int>(qmaps.shape[1]) != ps || static_cast<int>(bits.shape[3]) != ps)
    throw std::runtime_error("dataset: sensor patch dimensions mismatch");

  out.samples.resize(n);
  for (std::uint64_t i = 0; i < n; ++i) {
    TrainSample& s = out.samples[i];
    s.target = Image(p, p);
    std::copy_n(gt.f64.begin() + i * p * p, p * p, s.target.v.begin());
    s.bits.width = s.bits.height = ps;
    s.bits.frames = frames;
    s.bits.threshold.assign(qmaps.f64.begin() + i * ps * ps,
                            qmaps.f64.begin() + (i + 1) * ps * ps);
    s.bits.ones.assign(static_cast<std::size_t>(ps) * ps, 0.0);
    const std::size_t base = i * static_cast<std::size_t>(frames) * ps * ps;
    for (int k = 0; k < frames; ++k)
      for (int j = 0; j < ps * ps; ++j)
        s.bits.ones[j] += bits.bit[base + static_cast<std::size_t>(k) * ps * ps + j];
  }
  return out;
}

}  // namespace jot
