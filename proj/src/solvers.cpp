#include "jot/solvers.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "jot/likelihood.hpp"
#include "jot/rho.hpp"
#include "jot/rng.hpp"

namespace jot {
namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double l1_norm(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += std::fabs(x);
  return s;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2sq(const std::vector<double>& a) { return dot(a, a); }

Image patch_image(const std::vector<double>& v, int side) {
  Image img(side, side);
  img.v = v;
  return img;
}

// rho keeps rates strictly positive for any finite code, but c*exp(x)
// underflows to exact zero for x below about -745; the floor restores the
// invariant under IEEE arithmetic.
constexpr double kRateFloor = 1e-30;

// Sensor rates for a code: lambda = H rho(D z).
Image rates_for_code(const std::vector<double>& z, const PatchProblem& prob) {
  std::vector<double> p = prob.dict->multiply(z);
  rho_inplace(p, prob.c);
  Image lam = prob.op->apply(patch_image(p, prob.dict->patch_side));
  for (double& v : lam.v) v = std::max(v, kRateFloor);
  return lam;
}

}  // namespace

void shrink_inplace(std::vector<double>& v, double theta) {
  if (theta < 0.0) throw std::invalid_argument("shrink: threshold must be >= 0");
  for (double& x : v) {
    const double m = std::fabs(x) - theta;
    x = m > 0.0 ? (x < 0.0 ? -m : m) : 0.0;
  }
}

void shrink_inplace(std::vector<double>& v, const std::vector<double>& theta) {
  if (theta.size() != v.size()) throw std::invalid_argument("shrink: threshold length mismatch");
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (theta[i] < 0.0) throw std::invalid_argument("shrink: threshold must be >= 0");
    const double m = std::fabs(v[i]) - theta[i];
    v[i] = m > 0.0 ? (v[i] < 0.0 ? -m : m) : 0.0;
  }
}

std::vector<double> shrink(std::vector<double> v, double theta) {
  shrink_inplace(v, theta);
  return v;
}

std::vector<double> shrink(std::vector<double> v, const std::vector<double>& theta) {
  shrink_inplace(v, theta);
  return v;
}

double data_term(const std::vector<double>& z, const PatchProblem& prob) {
  return nll(rates_for_code(z, prob), prob.bits);
}

std::vector<double> data_grad(const std::vector<double>& z, const PatchProblem& prob) {
  // d nll / d z = D^T diag(rho'(Dz)) H^T grad_lambda nll.
  std::vector<double> a = prob.dict->multiply(z);
  std::vector<double> r = a;
  rho_inplace(r, prob.c);
  Image lam = prob.op->apply(patch_image(r, prob.dict->patch_side));
  for (double& v : lam.v) v = std::max(v, kRateFloor);
  const Image g = nll_grad(lam, prob.bits);
  const Image u = prob.op->apply_adjoint(g);
  std::vector<double> chained(u.v.size());
  for (std::size_t i = 0; i < chained.size(); ++i)
    chained[i] = rho_prime(a[i], prob.c) * u.v[i];
  return prob.dict->multiply_transpose(chained);
}

double objective(const std::vector<double>& z, const PatchProblem& prob, double mu) {
  return data_term(z, prob) + mu * l1_norm(z);
}

double lipschitz_estimate(const PatchProblem& prob, const std::vector<double>* z_at,
                          int iterations) {
  const int m = prob.code_length();
  const int side = prob.dict->patch_side;
  std::vector<double> z(m, 0.0);
  if (z_at) z = *z_at;

  std::vector<double> a = prob.dict->multiply(z);
  std::vector<double> rp(a.size()), rpp(a.size()), r = a;
  for (std::size_t i = 0; i < a.size(); ++i) {
    rp[i] = rho_prime(a[i], prob.c);
    rpp[i] = rho_second(a[i], prob.c);
  }
  rho_inplace(r, prob.c);
  Image lam = prob.op->apply(patch_image(r, side));
  for (double& v : lam.v) v = std::max(v, kRateFloor);
  const Image g = nll_grad(lam, prob.bits);
  const Image h = nll_hess_diag(lam, prob.bits);
  const Image u = prob.op->apply_adjoint(g);

  // Hessian-vector product of the data term at z:
  //   Hv = D^T[rho'' . (Dv) . H^T g] + D^T[rho' . H^T(h . H(rho' . Dv))]
  auto hvp = [&](const std::vector<double>& v) {
    std::vector<double> dv = prob.dict->multiply(v);
    std::vector<double> curved(dv.size()), smooth(dv.size());
    for (std::size_t i = 0; i < dv.size(); ++i) {
      curved[i] = rpp[i] * dv[i] * u.v[i];
      smooth[i] = rp[i] * dv[i];
    }
    const Image hs = prob.op->apply(patch_image(smooth, side));
    Image hh(hs.width, hs.height);
    for (std::size_t i = 0; i < hh.v.size(); ++i) hh.v[i] = h.v[i] * hs.v[i];
    const Image back = prob.op->apply_adjoint(hh);
    for (std::size_t i = 0; i < curved.size(); ++i) curved[i] += rp[i] * back.v[i];
    return prob.dict->multiply_transpose(curved);
  };

  CounterRng rng = CounterRng::keyed(0x4C697073ull /* "Lips" */, 0, 0);
  std::vector<double> v(m);
  for (double& x : v) x = rng.next_unit() - 0.5;
  double vn = std::sqrt(norm2sq(v));
  for (double& x : v) x /= vn;

  double estimate = 0.0;
  for (int it = 0; it < iterations; ++it) {
    std::vector<double> w = hvp(v);
    const double wn = std::sqrt(norm2sq(w));
    if (!(wn > 1e-300)) break;
    estimate = std::fabs(dot(v, w));
    for (std::size_t i = 0; i < w.size(); ++i) v[i] = w[i] / wn;
  }
  return std::max(estimate, 1e-12);
}

namespace {

struct ProxStep {
  std::vector<double> z;
  double data_value;  // data term at the new point
  double eta;
  int backtracks;
  bool ok;
};

// Backtracked proximal step from point y. The majorization test is on the
// smooth term only:
//   f(z+) <= f(y) + <z+ - y, grad> + ||z+ - y||^2 / (2 eta).
ProxStep prox_step(const std::vector<double>& y, const PatchProblem& prob,
                   const SolverConfig& cfg, double eta) {
  const double f_y = data_term(y, prob);
  const std::vector<double> grad = data_grad(y, prob);
  const double slack = 1e-12 * (1.0 + std::fabs(f_y));

  auto candidate = [&](double step) {
    std::vector<double> z(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) z[i] = y[i] - step * grad[i];
    shrink_inplace(z, cfg.mu * step);
    return z;
  };

  if (cfg.fixed_step > 0.0) {
    std::vector<double> z = candidate(cfg.fixed_step);
    const double f_z = data_term(z, prob);
    return {std::move(z), f_z, cfg.fixed_step, 0, true};
  }

  int backtracks = 0;
  std::vector<double> z = candidate(eta);
  double f_z = data_term(z, prob);
  for (;;) {
    std::vector<double> diff(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) diff[i] = z[i] - y[i];
    const double bound = f_y + dot(diff, grad) + norm2sq(diff) / (2.0 * eta) + slack;
    if (f_z <= bound) break;
    eta *= cfg.beta;
    ++backtracks;
    if (eta < 1e-18) return {std::move(z), f_z, eta, backtracks, false};
    z = candidate(eta);
    f_z = data_term(z, prob);
  }
  return {std::move(z), f_z, eta, backtracks, true};
}

void validate_config(const SolverConfig& cfg) {
  if (!(cfg.beta > 0.0 && cfg.beta < 1.0))
    throw std::invalid_argument("solver: beta must be in (0,1)");
  if (!(cfg.eta0 > 0.0)) throw std::invalid_argument("solver: eta0 must be > 0");
  if (cfg.mu < 0.0) throw std::invalid_argument("solver: mu must be >= 0");
  if (cfg.max_iters < 0) throw std::invalid_argument("solver: max_iters must be >= 0");
  if (cfg.variant == SolverVariant::FistaStepReset && cfg.reset_period < 1)
    throw std::invalid_argument("solver: reset period must be >= 1");
}

}  // namespace

SolveResult solve_ista(const PatchProblem& prob, const SolverConfig& cfg,
                       std::vector<double> z0) {
  validate_config(cfg);
  const auto t0 = Clock::now();
  std::vector<double> z = z0.empty() ? std::vector<double>(prob.code_length(), 0.0)
                                     : std::move(z0);

  SolveResult res;
  res.report.initial_objective = objective(z, prob, cfg.mu);
  double prev_obj = res.report.initial_objective;
  double eta = cfg.eta0;
  int quiet = 0;

  for (int t = 1; t <= cfg.max_iters; ++t) {
    ProxStep step = prox_step(z, prob, cfg, eta);
    eta = step.eta;
    z = std::move(step.z);
    const double obj = step.data_value + cfg.mu * l1_norm(z);
    res.report.total_iterations = t;
    if (cfg.record_iterations)
      res.report.iterations.push_back(
          {t, obj, eta, step.backtracks, false, 0.0, seconds_since(t0)});
    if (!step.ok || !std::isfinite(obj)) {
      res.report.failed = true;
      res.report.failure = "non-finite objective or vanishing step at iteration " +
                           std::to_string(t);
      break;
    }
    quiet = std::fabs(prev_obj - obj) <= cfg.tolerance * std::max(1.0, std::fabs(obj))
                ? quiet + 1
                : 0;
    prev_obj = obj;
    if (quiet >= cfg.tolerance_window) {
      res.report.converged = true;
      break;
    }
  }
  res.report.final_objective = prev_obj;
  res.report.seconds = seconds_since(t0);
  res.code = std::move(z);
  return res;
}

SolveResult solve_fista(const PatchProblem& prob, const SolverConfig& cfg,
                        std::vector<double> z0) {
  validate_config(cfg);
  const auto t0 = Clock::now();
  std::vector<double> z_prev = z0.empty() ? std::vector<double>(prob.code_length(), 0.0)
                                          : std::move(z0);
  std::vector<double> y = z_prev;

  SolveResult res;
  res.report.initial_objective = objective(z_prev, prob, cfg.mu);
  double prev_obj = res.report.initial_objective;
  double eta = cfg.eta0;
  double momentum = 1.0;
  int quiet = 0;

  for (int t = 1; t <= cfg.max_iters; ++t) {
    bool reset = false;
    if (cfg.variant == SolverVariant::FistaStepReset && t % cfg.reset_period == 0) {
      eta = cfg.eta0;
      reset = true;
    }
    ProxStep step = prox_step(y, prob, cfg, eta);
    eta = step.eta;
    const double obj = step.data_value + cfg.mu * l1_norm(step.z);
    res.report.total_iterations = t;
    if (!step.ok || !std::isfinite(obj)) {
      if (cfg.record_iterations)
        res.report.iterations.push_back(
            {t, obj, eta, step.backtracks, reset, 0.0, seconds_since(t0)});
      res.report.failed = true;
      res.report.failure = "non-finite objective or vanishing step at iteration " +
                           std::to_string(t);
      z_prev = std::move(step.z);
      prev_obj = obj;
      break;
    }

    const double momentum_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * momentum * momentum));
    const double weight = (momentum - 1.0) / momentum_next;
    if (cfg.record_iterations)
      res.report.iterations.push_back(
          {t, obj, eta, step.backtracks, reset, weight, seconds_since(t0)});
    y.resize(step.z.size());
    for (std::size_t i = 0; i < y.size(); ++i)
      y[i] = step.z[i] + weight * (step.z[i] - z_prev[i]);
    z_prev = std::move(step.z);
    momentum = momentum_next;

    quiet = std::fabs(prev_obj - obj) <= cfg.tolerance * std::max(1.0, std::fabs(obj))
                ? quiet + 1
                : 0;
    prev_obj = obj;
    if (quiet >= cfg.tolerance_window) {
      res.report.converged = true;
      break;
    }
  }
  res.report.final_objective = prev_obj;
  res.report.seconds = seconds_since(t0);
  res.code = std::move(z_prev);
  return res;
}

MlResult solve_ml_unregularized(const BitSummary& bits, const SensingOperator& op,
                                const MlConfig& cfg, const Image& x0) {
  if (!(cfg.beta > 0.0 && cfg.beta < 1.0))
    throw std::invalid_argument("solve_ml: beta must be in (0,1)");
  for (double v : x0.v)
    if (!(v > 0.0)) throw std::invalid_argument("solve_ml: x0 must be > 0 elementwise");

  const auto t0 = Clock::now();
  Image x = x0;
  auto objective_at = [&](const Image& xi) { return nll(op.apply(xi), bits); };

  MlResult res;
  res.report.initial_objective = objective_at(x);
  double prev_obj = res.report.initial_objective;
  double eta = cfg.eta0;
  int quiet = 0;

  for (int t = 1; t <= cfg.max_iters; ++t) {
    const Image lam = op.apply(x);
    const Image grad = op.apply_adjoint(nll_grad(lam, bits));
    const double f_x = nll(lam, bits);
    const double slack = 1e-12 * (1.0 + std::fabs(f_x));

    auto candidate = [&](double step) {
      Image xn(x.width, x.height);
      for (std::size_t i = 0; i < x.v.size(); ++i)
        xn.v[i] = std::max(x.v[i] - step * grad.v[i], cfg.floor_eps);
      return xn;
    };

    int backtracks = 0;
    Image xn = candidate(eta);
    double f_n = objective_at(xn);
    for (;;) {
      double lin = 0.0, quad = 0.0;
      for (std::size_t i = 0; i < x.v.size(); ++i) {
        const double d = xn.v[i] - x.v[i];
        lin += d * grad.v[i];
        quad += d * d;
      }
      if (f_n <= f_x + lin + quad / (2.0 * eta) + slack) break;
      eta *= cfg.beta;
      ++backtracks;
      if (eta < 1e-18) break;
      xn = candidate(eta);
      f_n = objective_at(xn);
    }

    x = std::move(xn);
    res.report.total_iterations = t;
    if (cfg.record_iterations)
      res.report.iterations.push_back(
          {t, f_n, eta, backtracks, false, 0.0, seconds_since(t0)});
    if (!std::isfinite(f_n) || eta < 1e-18) {
      res.report.failed = true;
      res.report.failure = "non-finite objective or vanishing step at iteration " +
                           std::to_string(t);
      prev_obj = f_n;
      break;
    }
    quiet = std::fabs(prev_obj - f_n) <= cfg.tolerance * std::max(1.0, std::fabs(f_n))
                ? quiet + 1
                : 0;
    prev_obj = f_n;
    if (quiet >= cfg.tolerance_window) {
      res.report.converged = true;
      break;
    }
  }
  res.report.final_objective = prev_obj;
  res.report.seconds = seconds_since(t0);
  res.x = std::move(x);
  return res;
}

SolverReport merge_reports(const std::vector<SolverReport>& reports) {
  SolverReport merged;
  std::size_t longest = 0;
  for (const SolverReport& r : reports) {
    longest = std::max(longest, r.iterations.size());
    merged.initial_objective += r.initial_objective;
    merged.final_objective += r.final_objective;
    merged.seconds += r.seconds;
    merged.total_iterations = std::max(merged.total_iterations, r.total_iterations);
    merged.failed = merged.failed || r.failed;
    if (r.failed && merged.failure.empty()) merged.failure = r.failure;
  }
  merged.converged = !reports.empty();
  for (const SolverReport& r : reports) merged.converged = merged.converged && r.converged;

  merged.iterations.resize(longest);
  for (std::size_t i = 0; i < longest; ++i) {
    merged.iterations[i].iteration = static_cast<int>(i) + 1;
    for (const SolverReport& r : reports) {
      if (r.iterations.empty()) continue;
      const IterationRecord& rec =
          i < r.iterations.size() ? r.iterations[i] : r.iterations.back();
      merged.iterations[i].objective += rec.objective;
      merged.iterations[i].backtracks += i < r.iterations.size() ? rec.backtracks : 0;
      merged.iterations[i].step_reset = merged.iterations[i].step_reset || rec.step_reset;
      merged.iterations[i].eta = std::max(merged.iterations[i].eta, rec.eta);
      merged.iterations[i].seconds += rec.seconds;
    }
  }
  return merged;
}

}  // namespace jot
