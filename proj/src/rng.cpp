#include "jot/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace jot {
namespace {

// Inversion by sequential search. Fine up to lambda ~ 30 where the cumulative
// loop stays short and exp(-lambda) is well above the underflow threshold.
std::int64_t poisson_inversion(double lambda, CounterRng& rng) {
  const double u = rng.next_unit();
  double p = std::exp(-lambda);
  double cum = p;
  std::int64_t k = 0;
  while (u > cum) {
    ++k;
    p *= lambda / static_cast<double>(k);
    cum += p;
    if (k > 2000) break;  // u is < 1, this is unreachable in practice
  }
  return k;
}

// PTRD: transformed rejection with squeeze (Hoermann 1993). Valid for
// lambda >= 10; exact, bounded expected number of uniforms per draw.
std::int64_t poisson_ptrd(double lambda, CounterRng& rng) {
  const double smu = std::sqrt(lambda);
  const double b = 0.931 + 2.53 * smu;
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double v_r = 0.9277 - 3.6224 / (b - 2.0);
  const double log_lambda = std::log(lambda);

  for (;;) {
    double u = rng.next_unit() - 0.5;
    double v = rng.next_unit();
    double us = 0.5 - std::fabs(u);
    double kf = std::floor((2.0 * a / us + b) * u + lambda + 0.43);
    if (us >= 0.07 && v <= v_r) return static_cast<std::int64_t>(kf);
    if (kf < 0.0 || (us < 0.013 && v > us)) continue;
    double k = kf;
    if (std::log(v * inv_alpha / (a / (us * us) + b)) <=
        k * log_lambda - lambda - std::lgamma(k + 1.0)) {
      return static_cast<std::int64_t>(kf);
    }
  }
}

}  // namespace

std::int64_t poisson_sample(double lambda, CounterRng& rng) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw std::invalid_argument("poisson_sample: rate must be finite and >= 0");
  if (lambda == 0.0) return 0;
  if (lambda < 30.0) return poisson_inversion(lambda, rng);
  return poisson_ptrd(lambda, rng);
}

}  // namespace jot
