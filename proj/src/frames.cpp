#include "jot/frames.hpp"

#include <stdexcept>

#include "jot/rng.hpp"

namespace jot {

BinaryFrameStack sample_binary_frames(const Image& rate, const ThresholdPattern& pattern,
                                      int frames, std::uint64_t seed) {
  require_finite_nonnegative(rate, "sample_binary_frames");
  validate(pattern);
  if (frames < 1) throw std::invalid_argument("sample_binary_frames: frames must be >= 1");

  BinaryFrameStack stack;
  stack.width = rate.width;
  stack.height = rate.height;
  stack.frames = frames;
  stack.threshold = expand_pattern(pattern, rate.width, rate.height);
  stack.bits.resize(static_cast<std::size_t>(frames) * rate.height * rate.width);

  const std::size_t pixels = rate.size();
  for (int k = 0; k < frames; ++k) {
    for (std::size_t j = 0; j < pixels; ++j) {
      CounterRng rng = CounterRng::keyed(seed, j, static_cast<std::uint64_t>(k));
      const std::int64_t e = poisson_sample(rate.v[j], rng);
      stack.bits[static_cast<std::size_t>(k) * pixels + j] =
          (e >= stack.threshold[j]) ? 1 : 0;
    }
  }
  return stack;
}

BinaryFrameStack stack_exposures(const std::vector<BinaryFrameStack>& stacks) {
  if (stacks.empty()) throw std::invalid_argument("stack_exposures: empty list");
  const BinaryFrameStack& first = stacks.front();
  BinaryFrameStack out;
  out.width = first.width;
  out.height = first.height;
  out.threshold = first.threshold;
  out.frames = 0;
  for (const BinaryFrameStack& s : stacks) {
    if (s.width != out.width || s.height != out.height)
      throw std::invalid_argument("stack_exposures: mismatched dimensions");
    if (s.threshold != out.threshold)
      throw std::invalid_argument("stack_exposures: mismatched threshold maps");
    out.frames += s.frames;
    out.bits.insert(out.bits.end(), s.bits.begin(), s.bits.end());
  }
  return out;
}

BitSummary summarize(const BinaryFrameStack& stack) {
  BitSummary s;
  s.width = stack.width;
  s.height = stack.height;
  s.frames = static_cast<double>(stack.frames);
  const std::size_t pixels = static_cast<std::size_t>(stack.width) * stack.height;
  s.ones.assign(pixels, 0.0);
  s.threshold.resize(pixels);
  for (std::size_t j = 0; j < pixels; ++j)
    s.threshold[j] = static_cast<double>(stack.threshold[j]);
  for (int k = 0; k < stack.frames; ++k)
    for (std::size_t j = 0; j < pixels; ++j)
      s.ones[j] += stack.bits[static_cast<std::size_t>(k) * pixels + j];
  return s;
}

BitSummary crop(const BitSummary& s, int x0, int y0, int w, int h) {
  if (x0 < 0 || y0 < 0 || x0 + w > s.width || y0 + h > s.height)
    throw std::invalid_argument("crop: region outside summary");
  BitSummary out;
  out.width = w;
  out.height = h;
  out.frames = s.frames;
  out.ones.resize(static_cast<std::size_t>(w) * h);
  out.threshold.resize(out.ones.size());
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t src = static_cast<std::size_t>(y0 + y) * s.width + (x0 + x);
      const std::size_t dst = static_cast<std::size_t>(y) * w + x;
      out.ones[dst] = s.ones[src];
      out.threshold[dst] = s.threshold[src];
    }
  }
  return out;
}

}  // namespace jot
