#include "jot/pattern.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "jot/rng.hpp"

namespace jot {

void validate(const ThresholdPattern& p) {
  if (p.tile_w < 1 || p.tile_h < 1)
    throw std::invalid_argument("pattern: tile dimensions must be >= 1");
  if (p.q.size() != static_cast<std::size_t>(p.tile_w) * p.tile_h)
    throw std::invalid_argument("pattern: tile size mismatch");
  for (std::int64_t q : p.q)
    if (q < 1) throw std::invalid_argument("pattern: thresholds must be integers >= 1");
}

ThresholdPattern make_uniform_pattern(int tile_w, int tile_h, std::int64_t q_min,
                                      std::int64_t q_max, std::uint64_t seed) {
  if (tile_w < 1 || tile_h < 1)
    throw std::invalid_argument("make_uniform_pattern: tile dimensions must be >= 1");
  if (q_min < 1 || q_max < q_min)
    throw std::invalid_argument("make_uniform_pattern: need q_max >= q_min >= 1");
  const std::int64_t cells = static_cast<std::int64_t>(tile_w) * tile_h;
  const std::int64_t levels = q_max - q_min + 1;
  if (cells < levels)
    throw std::invalid_argument(
        "make_uniform_pattern: tile too small to hold every level at least once");

  // floor(cells/levels) copies of every level, one extra for the first
  // cells%levels levels, then a seeded permutation.
  std::vector<std::int64_t> values;
  values.reserve(cells);
  const std::int64_t base = cells / levels;
  const std::int64_t extra = cells % levels;
  for (std::int64_t l = 0; l < levels; ++l) {
    const std::int64_t copies = base + (l < extra ? 1 : 0);
    for (std::int64_t c = 0; c < copies; ++c) values.push_back(q_min + l);
  }
  CounterRng rng = CounterRng::keyed(seed, 0x7061747465726eull /* "pattern" */, 0);
  shuffle(values, rng);

  ThresholdPattern p{tile_w, tile_h, std::move(values)};
  validate(p);
  return p;
}

std::vector<std::int64_t> hdr_covering_thresholds(double lambda_max) {
  if (!(lambda_max > 0.0))
    throw std::invalid_argument("hdr_covering_thresholds: lambda_max must be > 0");
  std::vector<std::int64_t> qs;
  std::int64_t q = 1;
  qs.push_back(q);
  double top = static_cast<double>(q) + 2.0 * std::sqrt(static_cast<double>(q));
  while (top < lambda_max) {
    // Largest integer with q' - 2*sqrt(q') <= top, i.e. sqrt(q') <= 1 + sqrt(1+top).
    const double root = 1.0 + std::sqrt(1.0 + top);
    std::int64_t next = static_cast<std::int64_t>(std::floor(root * root));
    while (next > 1 &&
           static_cast<double>(next) - 2.0 * std::sqrt(static_cast<double>(next)) > top)
      --next;
    if (next <= q) next = q + 1;
    q = next;
    qs.push_back(q);
    top = static_cast<double>(q) + 2.0 * std::sqrt(static_cast<double>(q));
  }
  return qs;
}

ThresholdPattern make_hdr_pattern(double lambda_max, int tile_side) {
  if (tile_side < 1) throw std::invalid_argument("make_hdr_pattern: tile_side must be >= 1");
  std::vector<std::int64_t> covering = hdr_covering_thresholds(lambda_max);
  const std::size_t cells = static_cast<std::size_t>(tile_side) * tile_side;
  if (cells < covering.size()) {
    std::ostringstream msg;
    msg << "make_hdr_pattern: tile_side^2 = " << cells << " cells cannot hold the "
        << covering.size() << " covering thresholds; need tile_side >= "
        << static_cast<int>(std::ceil(std::sqrt(static_cast<double>(covering.size()))));
    throw std::invalid_argument(msg.str());
  }

  // Surplus cells re-run the covering on the lowest decade, cycling through
  // the low-range list if the surplus exceeds it.
  std::vector<std::int64_t> values = covering;
  if (values.size() < cells) {
    const std::vector<std::int64_t> low = hdr_covering_thresholds(lambda_max / 10.0);
    std::size_t i = 0;
    while (values.size() < cells) values.push_back(low[i++ % low.size()]);
  }

  CounterRng rng = CounterRng::keyed(0x6864725F74696C65ull /* "hdr_tile" */, 0, 0);
  shuffle(values, rng);

  ThresholdPattern p{tile_side, tile_side, std::move(values)};
  validate(p);
  return p;
}

std::vector<std::int64_t> expand_pattern(const ThresholdPattern& p, int width, int height) {
  validate(p);
  if (width < 1 || height < 1)
    throw std::invalid_argument("expand_pattern: dimensions must be >= 1");
  std::vector<std::int64_t> map(static_cast<std::size_t>(width) * height);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x)
      map[static_cast<std::size_t>(y) * width + x] = p.at(x, y);
  return map;
}

ThresholdPattern load_pattern(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_pattern: cannot open " + path);
  int tile_h = 0, tile_w = 0;
  if (!(in >> tile_h >> tile_w))
    throw std::runtime_error("load_pattern: malformed header in " + path);
  if (tile_h < 1 || tile_w < 1)
    throw std::runtime_error("load_pattern: invalid tile dimensions in " + path);
  ThresholdPattern p;
  p.tile_w = tile_w;
  p.tile_h = tile_h;
  p.q.resize(static_cast<std::size_t>(tile_w) * tile_h);
  for (auto& q : p.q)
    if (!(in >> q)) throw std::runtime_error("load_pattern: truncated tile in " + path);
  validate(p);
  return p;
}

void save_pattern(const ThresholdPattern& p, const std::string& path) {
  validate(p);
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_pattern: cannot open " + path);
  out << p.tile_h << " " << p.tile_w << "\n";
  for (int y = 0; y < p.tile_h; ++y) {
    for (int x = 0; x < p.tile_w; ++x) {
      out << p.q[static_cast<std::size_t>(y) * p.tile_w + x];
      out << (x + 1 == p.tile_w ? '\n' : ' ');
    }
  }
  if (!out) throw std::runtime_error("save_pattern: write failed for " + path);
}

}  // namespace jot
