#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "jot/likelihood.hpp"
#include "jot/pattern.hpp"
#include "jot/rng.hpp"
#include "oracles.hpp"

using namespace jot;

namespace {

BitSummary single_pixel(double q, double ones, double frames) {
  BitSummary s;
  s.width = s.height = 1;
  s.frames = frames;
  s.ones = {ones};
  s.threshold = {q};
  return s;
}

Image single_rate(double lambda) {
  Image img(1, 1);
  img.v[0] = lambda;
  return img;
}

double nll_scalar(double lambda, double q, double n1, double frames) {
  return nll(single_rate(lambda), single_pixel(q, n1, frames));
}

}  // namespace

TEST_CASE("poisson cdf closed forms") {
  CHECK(poisson_cdf_below(1, 1.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-12));
  // q=3, lambda=2: e^-2 (1 + 2 + 2) = 5 e^-2
  CHECK(poisson_cdf_below(3, 2.0) == doctest::Approx(5.0 * std::exp(-2.0)).epsilon(1e-12));
  CHECK(poisson_cdf_below(7, 0.0) == 1.0);
  CHECK(poisson_cdf_below(1, 0.0) == 1.0);
  CHECK_THROWS_AS(poisson_cdf_below(0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(poisson_cdf_below(1, -0.5), std::invalid_argument);
}

TEST_CASE("poisson cdf agrees with direct log-space summation") {
  CounterRng rng = CounterRng::keyed(11, 0, 0);
  for (int i = 0; i < 400; ++i) {
    const long long q = 1 + static_cast<long long>(rng.next_below(200));
    const double lambda = std::exp(rng.next_unit() * 12.0 - 5.0);  // ~[6.7e-3, 1.1e3]
    const double got = poisson_cdf_below(q, lambda);
    const double want = oracle::brute_poisson_cdf_below(q, lambda);
    CHECK(oracle::rel_err(got, want) < 1e-11);
  }
}

TEST_CASE("cdf monotone nonincreasing in lambda and nondecreasing in q") {
  CounterRng rng = CounterRng::keyed(12, 0, 0);
  for (int i = 0; i < 1000; ++i) {
    const long long q = 1 + static_cast<long long>(rng.next_below(155));
    double a = std::exp(rng.next_unit() * 14.0 - 7.0);
    double b = std::exp(rng.next_unit() * 14.0 - 7.0);
    if (a > b) std::swap(a, b);
    CHECK(poisson_cdf_below(q, a) + 1e-12 >= poisson_cdf_below(q, b));
    CHECK(poisson_cdf_below(q + 1, a) + 1e-12 >= poisson_cdf_below(q, a));
  }
}

TEST_CASE("log tails are finite across extreme regimes") {
  for (double lambda : {1e-9, 1e-3, 0.5, 1.0, 10.0, 1e2, 1e4, 1e6}) {
    for (double q : {1.0, 2.0, 10.0, 155.0, 1e3, 1e5}) {
      const LogTailPair t = poisson_log_tails(q, lambda);
      CHECK(t.log_below <= 0.0);
      CHECK(t.log_reach <= 0.0);
      CHECK(std::isfinite(t.log_below + t.log_reach) == (std::isfinite(t.log_below) &&
                                                          std::isfinite(t.log_reach)));
      // at least one side must be meaningfully close to certainty
      CHECK((t.log_below > -746.0 || t.log_reach > -746.0));
      // derivatives stay finite wherever the observation is possible
      const Image rate = single_rate(lambda);
      CHECK(std::isfinite(nll_grad(rate, single_pixel(q, 0.0, 1.0)).v[0]));
      CHECK(std::isfinite(nll_hess_diag(rate, single_pixel(q, 0.0, 1.0)).v[0]));
      if (std::isfinite(t.log_reach)) {
        CHECK(std::isfinite(nll_grad(rate, single_pixel(q, 1.0, 1.0)).v[0]));
        CHECK(std::isfinite(nll_hess_diag(rate, single_pixel(q, 1.0, 1.0)).v[0]));
      }
    }
  }
}

TEST_CASE("nll closed forms") {
  // q=1, all bits zero, K=1: nll = sum lambda_j
  Image rate(3, 2);
  rate.v = {0.3, 1.0, 2.5, 0.0, 4.0, 0.7};
  BitSummary bits;
  bits.width = 3;
  bits.height = 2;
  bits.frames = 1;
  bits.ones.assign(6, 0.0);
  bits.threshold.assign(6, 1.0);
  double sum = 0.0;
  for (double v : rate.v) sum += v;
  CHECK(nll(rate, bits) == doctest::Approx(sum).epsilon(1e-12));

  // single pixel, q=1, b=1, lambda=1: -log(1 - e^-1)
  CHECK(nll_scalar(1.0, 1.0, 1.0, 1.0) ==
        doctest::Approx(-std::log(1.0 - std::exp(-1.0))).epsilon(1e-12));
  CHECK(nll_scalar(1.0, 1.0, 1.0, 1.0) == doctest::Approx(0.45867514).epsilon(1e-7));

  // impossible observation: rate 0 with an observed one
  CHECK(nll_scalar(0.0, 1.0, 1.0, 1.0) == std::numeric_limits<double>::infinity());
  CHECK(nll_scalar(0.0, 1.0, 0.0, 1.0) == 0.0);
}

TEST_CASE("nll additive over concatenated frames") {
  CounterRng rng = CounterRng::keyed(13, 0, 0);
  for (int rep = 0; rep < 20; ++rep) {
    Image rate(2, 2);
    for (double& v : rate.v) v = 0.1 + 5.0 * rng.next_unit();
    auto draw = [&](double frames) {
      BitSummary s;
      s.width = s.height = 2;
      s.frames = frames;
      s.threshold = {1.0, 2.0, 3.0, 4.0};
      s.ones.resize(4);
      for (auto& n : s.ones) n = static_cast<double>(rng.next_below(
          static_cast<std::uint64_t>(frames) + 1));
      return s;
    };
    BitSummary a = draw(3), b = draw(2);
    BitSummary both = a;
    both.frames = a.frames + b.frames;
    for (int j = 0; j < 4; ++j) both.ones[j] = a.ones[j] + b.ones[j];
    CHECK(nll(rate, both) ==
          doctest::Approx(nll(rate, a) + nll(rate, b)).epsilon(1e-12));
  }
}

TEST_CASE("gradient closed forms") {
  // q=1, b=0: d nll / d lambda = 1 exactly
  for (double lambda : {0.2, 1.0, 17.0, 300.0})
    CHECK(nll_grad(single_rate(lambda), single_pixel(1.0, 0.0, 1.0)).v[0] == 1.0);

  // q=1, b=1, lambda=1: -e^-1 / (1 - e^-1)
  const double want = -std::exp(-1.0) / (1.0 - std::exp(-1.0));
  CHECK(nll_grad(single_rate(1.0), single_pixel(1.0, 1.0, 1.0)).v[0] ==
        doctest::Approx(want).epsilon(1e-12));
  CHECK(want == doctest::Approx(-0.58197671).epsilon(1e-7));

  // q=1, b=0: second derivative 0 exactly (nll is linear)
  CHECK(nll_hess_diag(single_rate(3.0), single_pixel(1.0, 0.0, 1.0)).v[0] == 0.0);

  // q=1, b=1: strictly convex for every lambda > 0
  for (double lambda = 1e-3; lambda < 1e3; lambda *= 3.7)
    CHECK(nll_hess_diag(single_rate(lambda), single_pixel(1.0, 1.0, 1.0)).v[0] > 0.0);
}

TEST_CASE("gradient and hessian match finite differences") {
  CounterRng rng = CounterRng::keyed(14, 0, 0);
  int checked = 0;
  for (int i = 0; i < 300; ++i) {
    const double q = 1.0 + static_cast<double>(rng.next_below(155));
    const double lambda = std::exp(rng.next_unit() * std::log(1e7) + std::log(1e-3));
    const double frames = 1.0 + static_cast<double>(rng.next_below(8));
    const double ones = static_cast<double>(rng.next_below(
        static_cast<std::uint64_t>(frames) + 1));
    if (lambda > 1e4) continue;
    const BitSummary bits = single_pixel(q, ones, frames);
    const double h = 1e-5 * std::max(1.0, lambda);
    if (lambda - 2.0 * h <= 0.0) continue;
    ++checked;
    const double scale = frames * (lambda + q * std::log(q + 1.0) + 10.0);

    const auto fd_grad = oracle::derivative_with_noise(
        [&](double l) { return nll(single_rate(l), bits); }, lambda, h, scale);
    const double an_grad = nll_grad(single_rate(lambda), bits).v[0];
    CHECK(oracle::fd_match(an_grad, fd_grad, 1e-6));

    const auto fd_hess = oracle::derivative_with_noise(
        [&](double l) { return nll_grad(single_rate(l), bits).v[0]; }, lambda, h, scale);
    const double an_hess = nll_hess_diag(single_rate(lambda), bits).v[0];
    CHECK(oracle::fd_match(an_hess, fd_hess, 1e-5));
  }
  CHECK(checked > 150);
}

TEST_CASE("finite differences hold in the HDR threshold regimes") {
  const auto qs = hdr_covering_thresholds(1e5);
  CounterRng rng = CounterRng::keyed(15, 0, 0);
  for (double lambda : {1e-3, 1e2, 1e4}) {
    for (int i = 0; i < 30; ++i) {
      const double q = static_cast<double>(qs[rng.next_below(qs.size())]);
      const double frames = 1.0 + static_cast<double>(rng.next_below(8));
      // choose a possible outcome so nll is finite on the whole FD stencil
      const double p = std::exp(poisson_log_tails(q, lambda).log_below);
      const double ones = p > 0.5 ? 0.0 : frames;
      const BitSummary bits = single_pixel(q, ones, frames);
      const double h = 1e-5 * std::max(1.0, lambda);
      const double scale = frames * (lambda + q * std::log(q + 1.0) + 10.0);
      const auto fd_grad = oracle::derivative_with_noise(
          [&](double l) { return nll(single_rate(l), bits); }, lambda, h, scale);
      const double an_grad = nll_grad(single_rate(lambda), bits).v[0];
      CHECK(oracle::fd_match(an_grad, fd_grad, 1e-6));
      const auto fd_hess = oracle::derivative_with_noise(
          [&](double l) { return nll_grad(single_rate(l), bits).v[0]; }, lambda, h, scale);
      const double an_hess = nll_hess_diag(single_rate(lambda), bits).v[0];
      CHECK(oracle::fd_match(an_hess, fd_hess, 1e-5));
    }
  }
}

TEST_CASE("nll is convex along random segments") {
  CounterRng rng = CounterRng::keyed(16, 0, 0);
  for (int i = 0; i < 1000; ++i) {
    BitSummary bits;
    bits.width = bits.height = 2;
    bits.frames = 1.0 + static_cast<double>(rng.next_below(4));
    bits.threshold.resize(4);
    bits.ones.resize(4);
    for (auto& q : bits.threshold) q = 1.0 + static_cast<double>(rng.next_below(155));
    for (std::size_t j = 0; j < 4; ++j)
      bits.ones[j] = static_cast<double>(rng.next_below(
          static_cast<std::uint64_t>(bits.frames) + 1));
    Image l1(2, 2), l2(2, 2);
    for (double& v : l1.v) v = std::exp(rng.next_unit() * std::log(1e5) + std::log(1e-2));
    for (double& v : l2.v) v = std::exp(rng.next_unit() * std::log(1e5) + std::log(1e-2));
    const double t = rng.next_unit();
    Image mid(2, 2);
    for (std::size_t j = 0; j < 4; ++j) mid.v[j] = t * l1.v[j] + (1.0 - t) * l2.v[j];
    const double lhs = nll(mid, bits);
    const double rhs = t * nll(l1, bits) + (1.0 - t) * nll(l2, bits);
    CHECK(lhs <= rhs + 1e-9);
  }
}

TEST_CASE("gradient rejects impossible observations at rate zero") {
  CHECK_THROWS_AS(nll_grad(single_rate(0.0), single_pixel(1.0, 1.0, 1.0)),
                  std::domain_error);
  // possible observation at rate zero is fine
  CHECK(nll_grad(single_rate(0.0), single_pixel(1.0, 0.0, 1.0)).v[0] == 1.0);
  CHECK(nll_grad(single_rate(0.0), single_pixel(2.0, 0.0, 1.0)).v[0] == 0.0);
}
