#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace jot {

/// Hybrid exponential-linear intensity map with scale c:
///   rho(x) = c*exp(x) for x <= 0,  c*(1+x) for x > 0.
/// Strictly positive, strictly increasing and C^1; rho'' jumps at 0 and takes
/// the left-branch value c there by convention.
struct IntensityTransform {
  double c = 1.0;

  explicit IntensityTransform(double scale) : c(scale) {
    if (!(scale > 0.0)) throw std::invalid_argument("IntensityTransform: c must be > 0");
  }

  double operator()(double x) const { return x <= 0.0 ? c * std::exp(x) : c * (1.0 + x); }
  double prime(double x) const { return x <= 0.0 ? c * std::exp(x) : c; }
  double second(double x) const { return x <= 0.0 ? c * std::exp(x) : 0.0; }
};

inline double rho(double x, double c) { return IntensityTransform(c)(x); }
inline double rho_prime(double x, double c) { return IntensityTransform(c).prime(x); }
inline double rho_second(double x, double c) { return IntensityTransform(c).second(x); }

inline void rho_inplace(std::vector<double>& xs, double c) {
  const IntensityTransform t(c);
  for (double& x : xs) x = t(x);
}

}  // namespace jot
