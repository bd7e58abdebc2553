// Acceptance suite: end-to-end checks of the reconstruction stack at desk
// scale. Each criterion prints one PASS/FAIL line; the exit code is the
// number of failures.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "jot/dictionary.hpp"
#include "jot/frames.hpp"
#include "jot/likelihood.hpp"
#include "jot/metrics.hpp"
#include "jot/mlnet.hpp"
#include "jot/pattern.hpp"
#include "jot/reconstruct.hpp"
#include "jot/rng.hpp"
#include "jot/scene.hpp"
#include "jot/sensing.hpp"
#include "jot/solvers.hpp"
#include "jot/synthesis.hpp"
#include "jot/threads.hpp"
#include "oracles.hpp"

using namespace jot;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

double elapsed(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void report(int criterion, bool pass, const std::string& detail, double seconds) {
  std::printf("[%s] criterion %d: %s (%.1f s)\n", pass ? "PASS" : "FAIL", criterion,
              detail.c_str(), seconds);
  std::fflush(stdout);
  if (!pass) ++failures;
}

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

struct PatchInstance {
  Dictionary dict;
  SensingOperator op = SensingOperator::identity();
  BitSummary bits;
  PatchProblem prob;
};

PatchInstance make_patch_instance(std::uint64_t seed, int patch, int s, int atoms,
                                  int frames, double c) {
  PatchInstance inst;
  inst.dict = oracle::random_dictionary(patch, atoms, seed);
  inst.op = SensingOperator(s, 0.8);
  CounterRng rng = CounterRng::keyed(seed, 0x616363ull, 0);
  std::vector<double> z_true(atoms);
  for (double& v : z_true) v = 1.5 * (rng.next_unit() - 0.5);
  const Image rate = inst.op.apply(synthesize_patch(z_true, inst.dict, c));
  const ThresholdPattern pattern = make_uniform_pattern(s, s, 1, s * s, seed);
  inst.bits = summarize(sample_binary_frames(rate, pattern, frames, seed + 1));
  inst.prob.dict = &inst.dict;
  inst.prob.op = &inst.op;
  inst.prob.c = c;
  inst.prob.bits = inst.bits;
  return inst;
}

// In-memory equivalent of the make-dataset command.
std::vector<TrainSample> make_training_data(int count, int patch, int s, double sigma,
                                            const ThresholdPattern& pattern, int frames,
                                            double range, std::uint64_t seed) {
  const SensingOperator op(s, sigma);
  const int scene_side = 4 * patch;
  const int per_scene = 16;
  std::vector<TrainSample> samples;
  samples.reserve(count);
  const int scenes = (count + per_scene - 1) / per_scene;
  for (int sc = 0; sc < scenes; ++sc) {
    const Image scene = make_test_scene(scene_side, scene_side, range, mix64(seed) + sc);
    const BitSummary bits =
        summarize(sample_binary_frames(op.apply(scene), pattern, frames,
                                       mix64(seed ^ 0xABull) + sc));
    CounterRng pos = CounterRng::keyed(seed, 0x706F73ull, sc);
    for (int j = 0; j < per_scene && static_cast<int>(samples.size()) < count; ++j) {
      const int x0 = static_cast<int>(pos.next_below(scene_side - patch + 1));
      const int y0 = static_cast<int>(pos.next_below(scene_side - patch + 1));
      TrainSample sample;
      sample.target = crop(scene, x0, y0, patch, patch);
      sample.bits = crop(bits, x0 * s, y0 * s, patch * s, patch * s);
      samples.push_back(std::move(sample));
    }
  }
  return samples;
}

// ---------------------------------------------------------------------------
// 1. Derivative oracle suite.
void criterion_1() {
  const auto t0 = Clock::now();
  bool ok = true;
  std::string why;

  // nll_grad and nll_hess_diag across the full (lambda, q, K) envelope
  CounterRng rng = CounterRng::keyed(0xC1, 0, 0);
  int nll_checked = 0;
  while (nll_checked < 200) {
    const double q = 1.0 + static_cast<double>(rng.next_below(155));
    const double lambda =
        std::exp(rng.next_unit() * (std::log(1e4) - std::log(1e-3)) + std::log(1e-3));
    const double frames = 1.0 + static_cast<double>(rng.next_below(8));
    const double ones =
        static_cast<double>(rng.next_below(static_cast<std::uint64_t>(frames) + 1));
    const double h = 1e-5 * std::max(1.0, lambda);
    if (lambda - 2.0 * h <= 0.0) continue;
    ++nll_checked;
    const BitSummary bits = single_pixel(q, ones, frames);
    const double scale = frames * (lambda + q * std::log(q + 1.0) + 10.0);
    const auto fd_g = oracle::derivative_with_noise(
        [&](double l) { return nll(single_rate(l), bits); }, lambda, h, scale);
    if (!oracle::fd_match(nll_grad(single_rate(lambda), bits).v[0], fd_g, 1e-6)) {
      ok = false;
      why = "nll_grad mismatch at lambda=" + std::to_string(lambda) +
            " q=" + std::to_string(q);
    }
    const auto fd_h = oracle::derivative_with_noise(
        [&](double l) { return nll_grad(single_rate(l), bits).v[0]; }, lambda, h, scale);
    if (!oracle::fd_match(nll_hess_diag(single_rate(lambda), bits).v[0], fd_h, 1e-5)) {
      ok = false;
      why = "nll_hess mismatch at lambda=" + std::to_string(lambda) +
            " q=" + std::to_string(q);
    }
  }

  // data_grad on random small synthesis problems
  int data_checked = 0;
  for (std::uint64_t seed = 0; data_checked < 200; ++seed) {
    PatchInstance inst = make_patch_instance(7000 + seed, 4, 2, 8, 2, 10.0);
    CounterRng zr = CounterRng::keyed(seed, 0x7A7Aull, 0);
    std::vector<double> z(8);
    for (double& v : z) v = 1.5 * (zr.next_unit() - 0.5);
    const std::vector<double> grad = data_grad(z, inst.prob);
    for (int i = 0; i < 4; ++i) {
      const int idx = static_cast<int>(zr.next_below(8));
      const auto fd = oracle::derivative_with_noise(
          [&](double t) {
            std::vector<double> zp = z;
            zp[idx] = t;
            return data_term(zp, inst.prob);
          },
          z[idx], 1e-5, 0.0);
      ++data_checked;
      if (!oracle::fd_match(grad[idx], fd, 1e-6)) {
        ok = false;
        why = "data_grad mismatch, seed " + std::to_string(seed);
      }
    }
  }

  // all five network gradients on perturbed nets
  int net_entries = 0;
  for (std::uint64_t seed = 0; seed < 12; ++seed) {
    PatchInstance inst = make_patch_instance(9000 + seed, 4, 2, 6, 2, 10.0);
    PatchProblem prob = inst.prob;
    const double eta = 0.9 / lipschitz_estimate(prob);
    MLNetParams p = ista_init(inst.dict, inst.op, 10.0, eta, 0.5, 3);
    CounterRng jr = CounterRng::keyed(seed, 0x6A6A6Aull, 0);
    auto jitter = [&](std::vector<double>& v, double sc) {
      for (double& x : v) x += sc * (jr.next_unit() - 0.5);
    };
    jitter(p.A, 0.1);
    jitter(p.Q, 0.1);
    jitter(p.W, 0.05);
    for (double& t : p.theta) t = std::max(0.0, t + 0.02 * (jr.next_unit() - 0.5));
    jitter(p.dict.a, 0.1);

    Image target(4, 4);
    for (double& v : target.v) v = 12.0 * jr.next_unit();

    // margin check against the nonsmooth points; skip unlucky draws
    LayerTape tape;
    mlnet_forward(p, inst.bits, &tape);
    bool clean = true;
    for (const auto& b : tape.b)
      for (int i = 0; i < p.m; ++i)
        if (std::fabs(std::fabs(b[i]) - p.theta[i]) < 2e-3) clean = false;
    if (!clean) continue;

    MLNetGrads grads;
    grads.init_like(p);
    mlnet_sample_gradients(p, target, inst.bits, LossKind::Mse, grads);
    auto probe = [&](const std::vector<double>& grad,
                     const std::function<double*(MLNetParams&, int)>& entry, int count) {
      for (int r = 0; r < count; ++r) {
        const int idx = static_cast<int>(jr.next_below(grad.size()));
        MLNetParams q = p;
        double* slot = entry(q, idx);
        const double at = *slot;
        const auto fd = oracle::derivative_with_noise(
            [&](double t) {
              *slot = t;
              return mlnet_loss(mlnet_forward(q, inst.bits), target, LossKind::Mse);
            },
            at, 1e-5, 0.0);
        *slot = at;
        ++net_entries;
        if (!oracle::fd_match(grad[idx], fd, 1e-4)) {
          ok = false;
          why = "network gradient mismatch, seed " + std::to_string(seed);
        }
      }
    };
    probe(grads.W, [](MLNetParams& q, int i) { return &q.W[i]; }, 8);
    probe(grads.A, [](MLNetParams& q, int i) { return &q.A[i]; }, 8);
    probe(grads.Q, [](MLNetParams& q, int i) { return &q.Q[i]; }, 8);
    probe(grads.theta, [](MLNetParams& q, int i) { return &q.theta[i]; }, 4);
    probe(grads.D, [](MLNetParams& q, int i) { return &q.dict.a[i]; }, 8);
  }

  const double secs = elapsed(t0);
  char buf[256];
  std::snprintf(buf, sizeof(buf),
                "derivative oracles: %d nll instances (grad 1e-6, hess 1e-5), %d data_grad "
                "probes (1e-6), %d network entries (1e-4)%s%s",
                nll_checked, data_checked, net_entries, ok ? "" : " - ", why.c_str());
  report(1, ok && secs < 120.0 && net_entries >= 200, buf, secs);
}

// ---------------------------------------------------------------------------
// 2. ISTA <-> network equivalence.
void criterion_2() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  int problems = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    PatchInstance inst = make_patch_instance(20000 + seed, 4, 2, 8, 2, 10.0);
    const double eta = 0.9 / lipschitz_estimate(inst.prob);
    const double mu = 0.5;
    MLNetParams p = ista_init(inst.dict, inst.op, 10.0, eta, mu, 10);
    LayerTape tape;
    mlnet_forward(p, inst.bits, &tape);

    SolverConfig cfg;
    cfg.variant = SolverVariant::Ista;
    cfg.mu = mu;
    cfg.fixed_step = eta;
    cfg.tolerance = 0.0;
    for (int t = 1; t <= 10; ++t) {
      cfg.max_iters = t;
      const SolveResult res = solve_ista(inst.prob, cfg);
      for (int j = 0; j < p.m; ++j)
        worst = std::max(worst, std::fabs(res.code[j] - tape.z[t][j]));
    }
    ++problems;
  }
  const double secs = elapsed(t0);
  char buf[192];
  std::snprintf(buf, sizeof(buf),
                "ISTA-init network equals fixed-step ISTA for T=1..10 on %d problems, max "
                "abs diff %.3g (limit 1e-10)",
                problems, worst);
  report(2, worst <= 1e-10 && problems >= 50 && secs < 60.0, buf, secs);
}

// ---------------------------------------------------------------------------
// 3. Convexity probe.
void criterion_3() {
  const auto t0 = Clock::now();
  CounterRng rng = CounterRng::keyed(0xC3, 0, 0);
  double worst = -1e30;
  for (int i = 0; i < 1000; ++i) {
    BitSummary bits;
    bits.width = bits.height = 2;
    bits.frames = 1.0 + static_cast<double>(rng.next_below(4));
    bits.threshold.resize(4);
    bits.ones.resize(4);
    for (auto& q : bits.threshold) q = 1.0 + static_cast<double>(rng.next_below(155));
    for (std::size_t j = 0; j < 4; ++j)
      bits.ones[j] =
          static_cast<double>(rng.next_below(static_cast<std::uint64_t>(bits.frames) + 1));
    Image l1(2, 2), l2(2, 2), mid(2, 2);
    for (double& v : l1.v)
      v = std::exp(rng.next_unit() * (std::log(1e3) - std::log(1e-2)) + std::log(1e-2));
    for (double& v : l2.v)
      v = std::exp(rng.next_unit() * (std::log(1e3) - std::log(1e-2)) + std::log(1e-2));
    const double t = rng.next_unit();
    for (std::size_t j = 0; j < 4; ++j) mid.v[j] = t * l1.v[j] + (1.0 - t) * l2.v[j];
    worst = std::max(worst,
                     nll(mid, bits) - (t * nll(l1, bits) + (1.0 - t) * nll(l2, bits)));
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "nll midpoint convexity on 1000 random segments, worst violation %.3g "
                "(limit 1e-9)",
                worst);
  report(3, worst <= 1e-9, buf, elapsed(t0));
}

// Shared desk-scale low-light setup (matches the reported low-light figures).
struct LowLight {
  Image scene;
  SensingOperator op = SensingOperator::identity();
  BitSummary bits;
  Dictionary dict;
};

LowLight lowlight_setup(std::uint64_t scene_seed, std::uint64_t sample_seed) {
  LowLight ll;
  ll.scene = make_test_scene(64, 64, 10.0, scene_seed);
  ll.op = SensingOperator(5, 3.0);
  const ThresholdPattern pattern = make_uniform_pattern(5, 5, 1, 10, 0);
  ll.bits = summarize(
      sample_binary_frames(ll.op.apply(ll.scene), pattern, 4, sample_seed));
  ll.dict = make_dct_dictionary(8, 16);
  return ll;
}

// ---------------------------------------------------------------------------
// 4. Low-light reproduction: regularized vs unregularized margin.
void criterion_4() {
  const auto t0 = Clock::now();
  const LowLight ll = lowlight_setup(99, 42);
  const int threads = default_thread_count();

  ReconstructConfig ml_cfg;
  ml_cfg.method = Method::Ml;
  ml_cfg.c = 10.0;
  ml_cfg.ml.max_iters = 2000;
  ml_cfg.ml.tolerance = 1e-8;
  const double ml_db =
      psnr(reconstruct_image(ll.bits, ll.op, nullptr, nullptr, ml_cfg).image, ll.scene,
           10.0);

  // mu follows the s^2 scaling of the data term: the s=3 experiments use
  // mu=4, so the s=5 configuration gets 4 * 25/9 ~ 12.
  ReconstructConfig fista_cfg;
  fista_cfg.method = Method::Fista;
  fista_cfg.patch = 8;
  fista_cfg.stride = 8;
  fista_cfg.c = 10.0;
  fista_cfg.threads = threads;
  fista_cfg.solver.mu = 12.0;
  fista_cfg.solver.max_iters = 4000;
  fista_cfg.solver.tolerance = 1e-8;
  const double fista_db =
      psnr(reconstruct_image(ll.bits, ll.op, &ll.dict, nullptr, fista_cfg).image, ll.scene,
           10.0);

  const double secs = elapsed(t0);
  char buf[192];
  std::snprintf(buf, sizeof(buf),
                "low light 64x64 s=5 K=4: regularized %.2f dB vs unregularized %.2f dB "
                "(margin %.2f, need >= 5)",
                fista_db, ml_db, fista_db - ml_db);
  report(4, fista_db - ml_db >= 5.0 && secs < 600.0, buf, secs);
}

// Shared training setup for criteria 5 and 7.
struct Trained {
  MLNetParams init;
  MLNetParams best;
  TrainHistory history;
  TrainConfig cfg;
  std::vector<TrainSample> data;
  SensingOperator op = SensingOperator::identity();
  Dictionary dict;
};

Trained train_desk_scale() {
  Trained tr;
  tr.op = SensingOperator(3, 1.5);
  tr.dict = make_dct_dictionary(8, 16);
  const ThresholdPattern pattern = make_uniform_pattern(3, 3, 1, 9, 0);
  tr.data = make_training_data(2500, 8, 3, 1.5, pattern, 4, 10.0, 1);

  double lip = 0.0;
  for (int i = 0; i < 8; ++i) {
    PatchProblem prob{&tr.dict, &tr.op, 10.0, tr.data[i].bits};
    lip = std::max(lip, lipschitz_estimate(prob));
  }
  tr.init = ista_init(tr.dict, tr.op, 10.0, 0.9 / lip, 4.0, 4);

  tr.cfg.minibatch = 50;
  tr.cfg.learn_rate = 0.02;
  tr.cfg.epochs = 40;
  tr.cfg.validation_fraction = 0.2;
  tr.cfg.patience = 4;
  tr.cfg.loss = LossKind::Mse;
  tr.cfg.seed = 7;
  tr.cfg.threads = default_thread_count();

  auto [best, history] = train_mlnet(tr.data, tr.init, tr.cfg);
  tr.best = std::move(best);
  tr.history = std::move(history);
  return tr;
}

// ---------------------------------------------------------------------------
// 5. Depth/budget tradeoff on a held-out scene.
void criterion_5(const Trained& tr) {
  const auto t0 = Clock::now();
  const Image scene = make_test_scene(64, 64, 10.0, 909);
  const ThresholdPattern pattern = make_uniform_pattern(3, 3, 1, 9, 0);
  const BitSummary bits =
      summarize(sample_binary_frames(tr.op.apply(scene), pattern, 4, 4242));
  const int threads = default_thread_count();

  ReconstructConfig net_cfg;
  net_cfg.method = Method::Mlnet;
  net_cfg.patch = 8;
  net_cfg.stride = 8;
  net_cfg.c = 10.0;
  net_cfg.threads = threads;
  net_cfg.mlnet_layers = 4;
  const double trained_db =
      psnr(reconstruct_image(bits, tr.op, nullptr, &tr.best, net_cfg).image, scene, 10.0);
  const double init_db =
      psnr(reconstruct_image(bits, tr.op, nullptr, &tr.init, net_cfg).image, scene, 10.0);

  ReconstructConfig fista_cfg;
  fista_cfg.method = Method::Fista;
  fista_cfg.patch = 8;
  fista_cfg.stride = 8;
  fista_cfg.c = 10.0;
  fista_cfg.threads = threads;
  fista_cfg.solver.mu = 4.0;
  fista_cfg.solver.max_iters = 200;  // 50x the network depth
  fista_cfg.solver.tolerance = 0.0;
  const double fista_db =
      psnr(reconstruct_image(bits, tr.op, &tr.dict, nullptr, fista_cfg).image, scene, 10.0);

  char buf[224];
  std::snprintf(buf, sizeof(buf),
                "depth tradeoff: trained T=4 %.2f dB vs FISTA-200 %.2f dB (within 1 dB) "
                "and untrained T=4 %.2f dB (strictly below)",
                trained_db, fista_db, init_db);
  report(5, trained_db >= fista_db - 1.0 && trained_db > init_db, buf, elapsed(t0));
}

// ---------------------------------------------------------------------------
// 6. Exposure sweep.
void criterion_6() {
  const auto t0 = Clock::now();
  const Image scene = make_test_scene(64, 64, 10.0, 77);
  const SensingOperator op(3, 1.5);
  const Image rates = op.apply(scene);
  const ThresholdPattern pattern = make_uniform_pattern(3, 3, 1, 9, 0);
  const Dictionary dict = make_dct_dictionary(8, 16);
  const int threads = default_thread_count();
  const std::vector<int> ks = {1, 4, 16, 64};

  std::vector<double> ml_avg(ks.size(), 0.0);
  double fista_k1 = 0.0;
  for (int seed = 0; seed < 5; ++seed) {
    for (std::size_t i = 0; i < ks.size(); ++i) {
      const BitSummary bits = summarize(
          sample_binary_frames(rates, pattern, ks[i], 5000 + 100 * seed + ks[i]));
      ReconstructConfig cfg;
      cfg.method = Method::Ml;
      cfg.c = 10.0;
      cfg.ml.max_iters = 800;
      cfg.ml.tolerance = 1e-6;
      ml_avg[i] +=
          psnr(reconstruct_image(bits, op, nullptr, nullptr, cfg).image, scene, 10.0) / 5.0;
      if (ks[i] == 1) {
        ReconstructConfig fcfg;
        fcfg.method = Method::Fista;
        fcfg.patch = 8;
        fcfg.stride = 8;
        fcfg.c = 10.0;
        fcfg.threads = threads;
        fcfg.solver.mu = 4.0;
        fcfg.solver.max_iters = 1000;
        fcfg.solver.tolerance = 1e-6;
        fista_k1 +=
            psnr(reconstruct_image(bits, op, &dict, nullptr, fcfg).image, scene, 10.0) /
            5.0;
      }
    }
  }
  bool nondecreasing = true;
  for (std::size_t i = 1; i < ks.size(); ++i)
    if (ml_avg[i] < ml_avg[i - 1] - 1e-9) nondecreasing = false;

  char buf[224];
  std::snprintf(buf, sizeof(buf),
                "exposure sweep: ML dB over K {%.2f, %.2f, %.2f, %.2f} nondecreasing=%s; "
                "FISTA@K=1 %.2f dB vs ML@K=1 %.2f dB (margin %.2f, need >= 3)",
                ml_avg[0], ml_avg[1], ml_avg[2], ml_avg[3], nondecreasing ? "yes" : "no",
                fista_k1, ml_avg[0], fista_k1 - ml_avg[0]);
  report(6, nondecreasing && fista_k1 - ml_avg[0] >= 3.0, buf, elapsed(t0));
}

// ---------------------------------------------------------------------------
// 7. Training improvement and bit-exact reruns.
void criterion_7(const Trained& tr) {
  const auto t0 = Clock::now();
  const double ratio = tr.history.best_validation / tr.history.initial_validation;

  auto [best2, history2] = train_mlnet(tr.data, tr.init, tr.cfg);
  bool identical = tr.history.epochs.size() == history2.epochs.size() &&
                   tr.history.initial_validation == history2.initial_validation;
  if (identical)
    for (std::size_t i = 0; i < history2.epochs.size(); ++i) {
      identical = identical &&
                  tr.history.epochs[i].train_loss == history2.epochs[i].train_loss &&
                  tr.history.epochs[i].validation_loss ==
                      history2.epochs[i].validation_loss &&
                  tr.history.epochs[i].phase == history2.epochs[i].phase;
    }
  identical = identical && tr.best.W == best2.W && tr.best.A == best2.A &&
              tr.best.Q == best2.Q && tr.best.theta == best2.theta &&
              tr.best.dict.a == best2.dict.a;

  char buf[192];
  std::snprintf(buf, sizeof(buf),
                "training on %zu patches: validation %.3f -> %.3f (ratio %.3f, need <= "
                "0.8); rerun bit-identical=%s",
                tr.data.size(), tr.history.initial_validation, tr.history.best_validation,
                ratio, identical ? "yes" : "no");
  report(7, ratio <= 0.8 && identical && tr.data.size() >= 2000, buf, elapsed(t0));
}

// ---------------------------------------------------------------------------
// 8. Speed contract at T=25, single-threaded.
void criterion_8() {
  const auto t0 = Clock::now();
  const LowLight ll = lowlight_setup(55, 11);

  // Both sides target the identical objective at the solver-default mu = 4.
  PatchProblem probe{&ll.dict, &ll.op, 10.0, crop(ll.bits, 0, 0, 40, 40)};
  const double eta = 0.9 / lipschitz_estimate(probe);
  const MLNetParams net = ista_init(ll.dict, ll.op, 10.0, eta, 4.0, 25);

  ReconstructConfig net_cfg;
  net_cfg.method = Method::Mlnet;
  net_cfg.patch = 8;
  net_cfg.stride = 8;
  net_cfg.c = 10.0;
  net_cfg.threads = 1;
  const auto net_t0 = Clock::now();
  reconstruct_image(ll.bits, ll.op, nullptr, &net, net_cfg);
  const double net_secs = elapsed(net_t0);

  ReconstructConfig fista_cfg;
  fista_cfg.method = Method::Fista;
  fista_cfg.patch = 8;
  fista_cfg.stride = 8;
  fista_cfg.c = 10.0;
  fista_cfg.threads = 1;
  fista_cfg.solver.mu = 4.0;
  fista_cfg.solver.max_iters = 20000;
  fista_cfg.solver.tolerance = 1e-8;
  const auto fista_t0 = Clock::now();
  const ReconstructResult fr = reconstruct_image(ll.bits, ll.op, &ll.dict, nullptr,
                                                 fista_cfg);
  const double fista_secs = elapsed(fista_t0);

  const double ratio = fista_secs / net_secs;
  char buf[192];
  std::snprintf(buf, sizeof(buf),
                "speed: network T=25 %.3f s vs FISTA to 1e-8 %.1f s (%d iters), ratio "
                "%.0fx (need >= 100x)",
                net_secs, fista_secs, fr.merged.total_iterations, ratio);
  report(8, ratio >= 100.0, buf, elapsed(t0));
}

// ---------------------------------------------------------------------------
// 9. Closed-form scalar MLE.
void criterion_9() {
  const auto t0 = Clock::now();
  BitSummary bits;
  bits.width = 3;
  bits.height = 1;
  bits.frames = 10000.0;
  bits.threshold = {1.0, 1.0, 1.0};
  bits.ones = {1000.0, 5000.0, 9000.0};
  MlConfig cfg;
  cfg.max_iters = 20000;
  cfg.tolerance = 1e-14;
  const MlResult res = solve_ml_unregularized(bits, SensingOperator::identity(), cfg,
                                              Image(3, 1, 1.0));
  double worst = 0.0;
  const double rs[3] = {0.1, 0.5, 0.9};
  for (int i = 0; i < 3; ++i)
    worst = std::max(worst, std::fabs(res.x.v[i] + std::log1p(-rs[i])));
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "scalar MLE q=1 K=1e4: worst |lambda_hat + log(1-r)| = %.2g (limit 1e-3)",
                worst);
  report(9, worst <= 1e-3, buf, elapsed(t0));
}

}  // namespace

int main() {
  std::printf("acceptance suite (threads=%d)\n", default_thread_count());
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  const Trained tr = train_desk_scale();
  criterion_5(tr);
  criterion_6();
  criterion_7(tr);
  criterion_8();
  criterion_9();
  std::printf("%d of 9 criteria passed\n", 9 - failures);
  return failures;
}
