#include "jot/likelihood.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace jot {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kMaxSeriesIters = 2'000'000;

// log(1 - e^x) for x <= 0.
double log1mexp(double x) {
  if (x > 0.0) throw std::domain_error("log1mexp: argument must be <= 0");
  if (x == 0.0) return -kInf;
  if (x > -0.6931471805599453)  // -ln 2
    return std::log(-std::expm1(x));
  return std::log1p(-std::exp(x));
}

// Lower-tail series for the upper Poisson tail P(e >= q) = P(q, lambda)
// (regularized lower incomplete gamma), valid for lambda < q + 1:
//   P(q, lambda) = lambda^q e^-lambda / q! * sum_{n>=0} lambda^n / prod(q+i)
double log_upper_tail_series(double q, double lambda) {
  double sum = 1.0, term = 1.0;
  for (int n = 1; n < kMaxSeriesIters; ++n) {
    term *= lambda / (q + n);
    sum += term;
    if (term < sum * 1e-15) break;
  }
  return -lambda + q * std::log(lambda) - std::lgamma(q + 1.0) + std::log(sum);
}

// Lentz continued fraction for the lower Poisson tail P(e < q) = Q(q, lambda)
// (regularized upper incomplete gamma), valid for lambda >= q + 1.
double log_lower_tail_cf(double q, double lambda) {
  constexpr double tiny = 1e-300;
  double b = lambda + 1.0 - q;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxSeriesIters; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - q);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < 1e-16) break;
  }
  return -lambda + q * std::log(lambda) - std::lgamma(q) + std::log(h);
}

struct PixelTails {
  double log_below;    // log P(e < q)
  double log_reach;    // log P(e >= q)
  double ratio_below;  // g / p,     g = pmf(q-1) = -dp/dlambda
  double ratio_reach;  // g / (1-p)
};

constexpr int kSmallQ = 24;
constexpr double kSmallLambda = 500.0;

// log(n!) for n <= kSmallQ.
const double* log_factorials() {
  static const auto table = [] {
    std::array<double, kSmallQ + 1> t{};
    t[0] = 0.0;
    for (int n = 1; n <= kSmallQ; ++n) t[n] = t[n - 1] + std::log(static_cast<double>(n));
    return t;
  }();
  return table.data();
}

// Linear-space evaluation for small integer thresholds and moderate rates;
// the common factors e^-lambda and lambda^q cancel analytically out of the
// ratios, so nothing ever under- or overflows on this path.
PixelTails pixel_tails_small_q(double q, double lambda) {
  // S = sum_{n<q} lambda^n / n!, and the pmf prefactor lambda^(q-1)/(q-1)!.
  double term = 1.0, s = 1.0, prefactor = 1.0;
  for (int n = 1; n < static_cast<int>(q); ++n) {
    term *= lambda / n;
    s += term;
    prefactor = term;
  }
  const double e = std::exp(-lambda);
  const double p = e * s;
  PixelTails t;
  t.ratio_below = prefactor / s;
  if (p <= 0.5) {
    t.log_below = -lambda + std::log(s);
    t.log_reach = std::log1p(-p);
    t.ratio_reach = e * prefactor / (1.0 - p);
  } else {
    // upper tail via its own series: 1-p = e^-lambda lambda^q/q! * T with
    // T = sum_{j>=0} lambda^j / ((q+1)...(q+j)).
    double tt = 1.0, tterm = 1.0;
    for (int j = 1; j < kMaxSeriesIters; ++j) {
      tterm *= lambda / (q + j);
      tt += tterm;
      if (tterm < tt * 1e-15) break;
    }
    t.log_reach = -lambda + q * std::log(lambda) -
                  log_factorials()[static_cast<int>(q)] + std::log(tt);
    const double upper = std::exp(t.log_reach);
    t.log_below = std::log1p(-upper);
    t.ratio_reach = q / (lambda * tt);
  }
  return t;
}

// Derivative-only variant: the g/p and g/(1-p) ratios need no logarithms at
// all on the small-q path, which keeps the per-pixel gradient loops cheap.
struct RatioPair {
  double below;  // g / p
  double reach;  // g / (1-p)
};

RatioPair pixel_ratios(double q, double lambda) {
  if (q == 1.0) return {1.0, 1.0 / std::expm1(lambda)};
  if (q <= static_cast<double>(kSmallQ) && lambda <= kSmallLambda) {
    double term = 1.0, s = 1.0, prefactor = 1.0;
    for (int n = 1; n < static_cast<int>(q); ++n) {
      term *= lambda / n;
      s += term;
      prefactor = term;
    }
    RatioPair r;
    r.below = prefactor / s;
    const double e = std::exp(-lambda);
    const double p = e * s;
    if (p <= 0.5) {
      r.reach = e * prefactor / (1.0 - p);
    } else {
      double tt = 1.0, tterm = 1.0;
      for (int j = 1; j < kMaxSeriesIters; ++j) {
        tterm *= lambda / (q + j);
        tt += tterm;
        if (tterm < tt * 1e-15) break;
      }
      r.reach = q / (lambda * tt);
    }
    return r;
  }
  double log_below, log_reach;
  if (lambda < q + 1.0) {
    log_reach = log_upper_tail_series(q, lambda);
    log_below = log1mexp(log_reach);
  } else {
    log_below = log_lower_tail_cf(q, lambda);
    log_reach = log1mexp(log_below);
  }
  const double log_g = -lambda + (q - 1.0) * std::log(lambda) - std::lgamma(q);
  return {std::exp(log_g - log_below), std::exp(log_g - log_reach)};
}

PixelTails pixel_tails(double q, double lambda) {
  if (lambda == 0.0) return {0.0, -kInf, (q == 1.0) ? 1.0 : 0.0, kInf};
  if (q == 1.0) {
    // p = e^-lambda exactly; g = e^-lambda, so g/p = 1 and g/(1-p) = 1/(e^l - 1).
    return {-lambda, log1mexp(-lambda), 1.0, 1.0 / std::expm1(lambda)};
  }
  if (q <= static_cast<double>(kSmallQ) && lambda <= kSmallLambda)
    return pixel_tails_small_q(q, lambda);
  PixelTails t;
  if (lambda < q + 1.0) {
    t.log_reach = log_upper_tail_series(q, lambda);
    t.log_below = log1mexp(t.log_reach);
  } else {
    t.log_below = log_lower_tail_cf(q, lambda);
    t.log_reach = log1mexp(t.log_below);
  }
  const double log_g = -lambda + (q - 1.0) * std::log(lambda) - std::lgamma(q);
  t.ratio_below = std::exp(log_g - t.log_below);
  t.ratio_reach = std::exp(log_g - t.log_reach);
  return t;
}

struct PixelDerivs {
  double grad;
  double hess;
};

// First and second derivative of -n0 log p - n1 log(1-p) w.r.t. lambda. The
// 1/p and 1/(1-p) factors only ever appear multiplied by the pmf g, so the
// ratios from pixel_tails keep everything finite.
PixelDerivs pixel_derivs(double q, double lambda, double n0, double n1) {
  if (lambda == 0.0) {
    if (n1 > 0.0)
      throw std::domain_error("nll_grad: rate 0 with an observed one-bit");
    // dp/dlambda at 0 is -1 for q = 1 and 0 for q >= 2.
    const double g = (q == 1.0) ? 1.0 : 0.0;
    return {n0 * g, 0.0};
  }
  const RatioPair t = pixel_ratios(q, lambda);
  const double e0 = (n0 > 0.0) ? t.below : 0.0;
  const double e1 = (n1 > 0.0) ? t.reach : 0.0;
  const double grad = n0 * e0 - n1 * e1;
  // d/dlambda of the pmf factor g: g' = g * ((q-1)/lambda - 1), and
  // hess = g'*(n0/p - n1/(1-p)) + g^2*(n0/p^2 + n1/(1-p)^2).
  const double gprime_over_g = (q - 1.0) / lambda - 1.0;
  const double hess = gprime_over_g * grad + n0 * e0 * e0 + n1 * e1 * e1;
  return {grad, hess};
}

}  // namespace

LogTailPair poisson_log_tails(double q, double lambda) {
  if (!(q >= 1.0)) throw std::invalid_argument("poisson_log_tails: q must be >= 1");
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw std::invalid_argument("poisson_log_tails: lambda must be finite and >= 0");
  const PixelTails t = pixel_tails(q, lambda);
  return {t.log_below, t.log_reach};
}

double poisson_cdf_below(std::int64_t q, double lambda) {
  if (q < 1) throw std::invalid_argument("poisson_cdf_below: q must be >= 1");
  return std::exp(poisson_log_tails(static_cast<double>(q), lambda).log_below);
}

double log_poisson_pmf_at(double q_minus_1, double lambda) {
  if (lambda == 0.0) return (q_minus_1 == 0.0) ? 0.0 : -kInf;
  return -lambda + q_minus_1 * std::log(lambda) - std::lgamma(q_minus_1 + 1.0);
}

double nll(const Image& rate, const BitSummary& bits) {
  if (rate.width != bits.width || rate.height != bits.height)
    throw std::invalid_argument("nll: rate/bits dimension mismatch");
  require_finite_nonnegative(rate, "nll");
  double total = 0.0;
  for (std::size_t j = 0; j < bits.size(); ++j) {
    const double n1 = bits.ones[j];
    const double n0 = bits.frames - n1;
    const double lambda = rate.v[j];
    if (lambda == 0.0) {
      if (n1 > 0.0) return kInf;  // impossible observation
      continue;                   // log p = 0
    }
    const LogTailPair t = poisson_log_tails(bits.threshold[j], lambda);
    if (n0 > 0.0) total -= n0 * t.log_below;
    if (n1 > 0.0) {
      if (t.log_reach == -kInf) return kInf;
      total -= n1 * t.log_reach;
    }
  }
  return total;
}

double nll(const Image& rate, const BinaryFrameStack& stack) {
  return nll(rate, summarize(stack));
}

Image nll_grad(const Image& rate, const BitSummary& bits) {
  if (rate.width != bits.width || rate.height != bits.height)
    throw std::invalid_argument("nll_grad: rate/bits dimension mismatch");
  require_finite_nonnegative(rate, "nll_grad");
  Image g(rate.width, rate.height);
  for (std::size_t j = 0; j < bits.size(); ++j) {
    const double n1 = bits.ones[j];
    g.v[j] = pixel_derivs(bits.threshold[j], rate.v[j], bits.frames - n1, n1).grad;
  }
  return g;
}

Image nll_hess_diag(const Image& rate, const BitSummary& bits) {
  if (rate.width != bits.width || rate.height != bits.height)
    throw std::invalid_argument("nll_hess_diag: rate/bits dimension mismatch");
  require_finite_nonnegative(rate, "nll_hess_diag");
  Image h(rate.width, rate.height);
  for (std::size_t j = 0; j < bits.size(); ++j) {
    const double n1 = bits.ones[j];
    h.v[j] = pixel_derivs(bits.threshold[j], rate.v[j], bits.frames - n1, n1).hess;
  }
  return h;
}

}  // namespace jot
