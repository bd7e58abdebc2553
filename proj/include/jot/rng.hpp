#pragma once

#include <cstdint>
#include <vector>

namespace jot {

/// splitmix64 finalizer.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Small counter-style generator. Streams are derived from (seed, stream,
/// index) so per-pixel/per-frame sampling is schedule independent: the same
/// key always yields the same sequence no matter which thread draws it.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t state) : state_(state) {}

  static CounterRng keyed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
    std::uint64_t s = mix64(seed);
    s = mix64(s ^ (0x9E3779B97F4A7C15ull * (stream + 1)));
    s = mix64(s ^ (0xC2B2AE3D27D4EB4Full * (index + 1)));
    return CounterRng(s);
  }

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform double in the open interval (0,1).
  double next_unit() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  /// Uniform integer in [0, n), n >= 1.
  std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

 private:
  std::uint64_t state_;
};

/// Exact Poisson sampler: sequential-search inversion for small rates,
/// Hoermann's PTRD transformed rejection for large ones. Deterministic per
/// generator state.
std::int64_t poisson_sample(double lambda, CounterRng& rng);

/// Fisher-Yates shuffle driven by a CounterRng.
template <typename T>
void shuffle(std::vector<T>& items, CounterRng& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(rng.next_below(i));
    std::swap(items[i - 1], items[j]);
  }
}

}  // namespace jot
