#include "jot/mlnet.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "jot/likelihood.hpp"
#include "jot/rho.hpp"
#include "jot/rng.hpp"
#include "jot/tensor.hpp"
#include "jot/threads.hpp"

namespace jot {
namespace {

// y = M v for row-major M (rows x cols).
std::vector<double> matvec(const std::vector<double>& m, int rows, int cols,
                           const std::vector<double>& v) {
  std::vector<double> out(rows, 0.0);
  for (int i = 0; i < rows; ++i) {
    const double* row = &m[static_cast<std::size_t>(i) * cols];
    double acc = 0.0;
    for (int j = 0; j < cols; ++j) acc += row[j] * v[j];
    out[i] = acc;
  }
  return out;
}

// y = M^T v for row-major M (rows x cols).
std::vector<double> matvec_t(const std::vector<double>& m, int rows, int cols,
                             const std::vector<double>& v) {
  std::vector<double> out(cols, 0.0);
  for (int i = 0; i < rows; ++i) {
    const double* row = &m[static_cast<std::size_t>(i) * cols];
    const double vi = v[i];
    for (int j = 0; j < cols; ++j) out[j] += row[j] * vi;
  }
  return out;
}

// accum += scale * a b^T (rows = |a|, cols = |b|).
void add_outer(std::vector<double>& accum, const std::vector<double>& a,
               const std::vector<double>& b, double scale) {
  const int rows = static_cast<int>(a.size());
  const int cols = static_cast<int>(b.size());
  for (int i = 0; i < rows; ++i) {
    double* row = &accum[static_cast<std::size_t>(i) * cols];
    const double ai = scale * a[i];
    if (ai == 0.0) continue;
    for (int j = 0; j < cols; ++j) row[j] += ai * b[j];
  }
}

Image patch_image(const std::vector<double>& v, int side) {
  Image img(side, side);
  img.v = v;
  return img;
}

struct LayerIntermediates {
  std::vector<double> a1;   // A z
  std::vector<double> r;    // rho(a1)
  std::vector<double> a2;   // Q z
  std::vector<double> w;    // rho'(a2)
  std::vector<double> u;    // H^T grad_nll(H rho(a1))
  Image lam;                // H rho(a1)
};

// Restores strict rate positivity when c*exp(x) underflows to exact zero;
// keep in sync with the solver data path so ISTA equivalence is bit-tight.
constexpr double kRateFloor = 1e-30;

LayerIntermediates layer_intermediates(const MLNetParams& p, const std::vector<double>& z,
                                       const BitSummary& bits) {
  const int side = p.dict.patch_side;
  LayerIntermediates li;
  li.a1 = matvec(p.A, p.n, p.m, z);
  li.r = li.a1;
  rho_inplace(li.r, p.c);
  li.lam = p.op.apply(patch_image(li.r, side));
  for (double& v : li.lam.v) v = std::max(v, kRateFloor);
  const Image g = nll_grad(li.lam, bits);
  li.u = p.op.apply_adjoint(g).v;
  li.a2 = matvec(p.Q, p.n, p.m, z);
  li.w.resize(li.a2.size());
  for (std::size_t i = 0; i < li.a2.size(); ++i) li.w[i] = rho_prime(li.a2[i], p.c);
  return li;
}

}  // namespace

void validate(const MLNetParams& p) {
  if (p.layers < 0) throw std::invalid_argument("mlnet: layers must be >= 0");
  if (p.n != p.dict.atom_dim || p.m != p.dict.atom_count)
    throw std::invalid_argument("mlnet: dims inconsistent with dictionary");
  const std::size_t nm = static_cast<std::size_t>(p.n) * p.m;
  if (p.A.size() != nm || p.Q.size() != nm || p.W.size() != nm ||
      p.theta.size() != static_cast<std::size_t>(p.m))
    throw std::invalid_argument("mlnet: tensor size mismatch");
  for (double t : p.theta)
    if (!(t >= 0.0)) throw std::invalid_argument("mlnet: theta must be >= 0 coordinatewise");
  auto finite = [](const std::vector<double>& v) {
    for (double x : v)
      if (!std::isfinite(x)) return false;
    return true;
  };
  if (!finite(p.A) || !finite(p.Q) || !finite(p.W) || !finite(p.theta) || !finite(p.dict.a))
    throw std::invalid_argument("mlnet: non-finite parameter");
}

MLNetParams ista_init(const Dictionary& dict, const SensingOperator& op, double c,
                      double eta, double mu, int layers) {
  if (!(eta > 0.0)) throw std::invalid_argument("ista_init: eta must be > 0");
  if (mu < 0.0) throw std::invalid_argument("ista_init: mu must be >= 0");
  MLNetParams p;
  p.layers = layers;
  p.n = dict.atom_dim;
  p.m = dict.atom_count;
  p.c = c;
  p.init_eta = eta;
  p.init_mu = mu;
  p.op = op;
  p.dict = dict;
  p.A = dict.a;
  p.Q = dict.a;
  p.W.resize(static_cast<std::size_t>(p.m) * p.n);
  for (int j = 0; j < p.m; ++j)
    for (int i = 0; i < p.n; ++i)
      p.W[static_cast<std::size_t>(j) * p.n + i] = eta * dict.at(i, j);
  p.theta.assign(p.m, mu * eta);
  validate(p);
  return p;
}

Image mlnet_forward(const MLNetParams& p, const BitSummary& bits, LayerTape* tape) {
  validate(p);
  const int side = p.dict.patch_side;
  if (bits.width != side * p.op.upsampling() || bits.height != side * p.op.upsampling())
    throw std::invalid_argument("mlnet_forward: bits do not match the patch sensor region");

  std::vector<double> z(p.m, 0.0);
  if (tape) {
    tape->z.assign(1, z);
    tape->b.clear();
  }
  for (int t = 1; t <= p.layers; ++t) {
    const LayerIntermediates li = layer_intermediates(p, z, bits);
    std::vector<double> v(li.u.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = li.w[i] * li.u[i];
    const std::vector<double> wv = matvec(p.W, p.m, p.n, v);
    std::vector<double> b(p.m);
    for (int i = 0; i < p.m; ++i) b[i] = z[i] - wv[i];
    for (int i = 0; i < p.m; ++i) {
      const double mag = std::fabs(b[i]) - p.theta[i];
      z[i] = mag > 0.0 ? (b[i] < 0.0 ? -mag : mag) : 0.0;
      if (!std::isfinite(b[i]))
        throw std::runtime_error("mlnet_forward: non-finite value at layer " +
                                 std::to_string(t));
    }
    if (tape) {
      tape->b.push_back(b);
      tape->z.push_back(z);
    }
  }
  std::vector<double> out = p.dict.multiply(z);
  rho_inplace(out, p.c);
  return patch_image(out, side);
}

double mlnet_loss(const Image& xhat, const Image& target, LossKind kind) {
  if (!xhat.same_shape(target)) throw std::invalid_argument("mlnet_loss: shape mismatch");
  double acc = 0.0;
  if (kind == LossKind::Mse) {
    for (std::size_t i = 0; i < xhat.v.size(); ++i) {
      const double d = target.v[i] - xhat.v[i];
      acc += d * d;
    }
  } else {
    for (std::size_t i = 0; i < xhat.v.size(); ++i) {
      if (target.v[i] < 0.0)
        throw std::invalid_argument("mlnet_loss: negative target with log loss");
      const double d = std::log1p(target.v[i]) - std::log1p(xhat.v[i]);
      acc += d * d;
    }
  }
  return 0.5 * acc;
}

std::vector<double> mlnet_loss_grad(const Image& xhat, const Image& target, LossKind kind) {
  if (!xhat.same_shape(target)) throw std::invalid_argument("mlnet_loss_grad: shape mismatch");
  std::vector<double> g(xhat.v.size());
  if (kind == LossKind::Mse) {
    for (std::size_t i = 0; i < g.size(); ++i) g[i] = xhat.v[i] - target.v[i];
  } else {
    for (std::size_t i = 0; i < g.size(); ++i) {
      if (target.v[i] < 0.0)
        throw std::invalid_argument("mlnet_loss_grad: negative target with log loss");
      g[i] = (std::log1p(xhat.v[i]) - std::log1p(target.v[i])) / (1.0 + xhat.v[i]);
    }
  }
  return g;
}

void MLNetGrads::init_like(const MLNetParams& p) {
  const std::size_t nm = static_cast<std::size_t>(p.n) * p.m;
  A.assign(nm, 0.0);
  Q.assign(nm, 0.0);
  W.assign(nm, 0.0);
  theta.assign(p.m, 0.0);
  D.assign(nm, 0.0);
}

void MLNetGrads::add_scaled(const MLNetGrads& other, double scale) {
  auto axpy = [scale](std::vector<double>& dst, const std::vector<double>& src) {
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += scale * src[i];
  };
  axpy(A, other.A);
  axpy(Q, other.Q);
  axpy(W, other.W);
  axpy(theta, other.theta);
  axpy(D, other.D);
}

void mlnet_backward(const MLNetParams& p, const LayerTape& tape, const BitSummary& bits,
                    const std::vector<double>& dloss_dzT, MLNetGrads& grads) {
  if (tape.z.size() != static_cast<std::size_t>(p.layers) + 1 ||
      tape.b.size() != static_cast<std::size_t>(p.layers))
    throw std::invalid_argument("mlnet_backward: tape does not match layer count");
  if (dloss_dzT.size() != static_cast<std::size_t>(p.m))
    throw std::invalid_argument("mlnet_backward: seed length mismatch");

  const int side = p.dict.patch_side;
  std::vector<double> dz = dloss_dzT;

  for (int t = p.layers; t >= 1; --t) {
    const std::vector<double>& z_prev = tape.z[t - 1];
    const std::vector<double>& b = tape.b[t - 1];

    // Shrinkage subgradient: pass-through where |b| > theta, else dead.
    std::vector<double> db(p.m);
    for (int i = 0; i < p.m; ++i) {
      const bool active = std::fabs(b[i]) > p.theta[i];
      db[i] = active ? dz[i] : 0.0;
      if (active) grads.theta[i] -= dz[i] * (b[i] > 0.0 ? 1.0 : -1.0);
    }

    const LayerIntermediates li = layer_intermediates(p, z_prev, bits);
    const Image h = nll_hess_diag(li.lam, bits);

    std::vector<double> v(li.u.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = li.w[i] * li.u[i];

    // b = z - W v: dW accumulates -db v^T, and dv = -W^T db.
    add_outer(grads.W, db, v, -1.0);
    std::vector<double> dv = matvec_t(p.W, p.m, p.n, db);
    for (double& x : dv) x = -x;

    // Q path: d a2 = dv . u . rho''(a2).
    std::vector<double> da2(dv.size());
    for (std::size_t i = 0; i < da2.size(); ++i)
      da2[i] = dv[i] * li.u[i] * rho_second(li.a2[i], p.c);
    add_outer(grads.Q, da2, z_prev, 1.0);

    // A path: d a1 = rho'(a1) . H^T(hess . H(dv . rho'(a2))).
    std::vector<double> smooth(dv.size());
    for (std::size_t i = 0; i < smooth.size(); ++i) smooth[i] = dv[i] * li.w[i];
    const Image hs = p.op.apply(patch_image(smooth, side));
    Image curved(hs.width, hs.height);
    for (std::size_t i = 0; i < curved.v.size(); ++i) curved.v[i] = h.v[i] * hs.v[i];
    const Image back = p.op.apply_adjoint(curved);
    std::vector<double> da1(back.v.size());
    for (std::size_t i = 0; i < da1.size(); ++i)
      da1[i] = back.v[i] * rho_prime(li.a1[i], p.c);
    add_outer(grads.A, da1, z_prev, 1.0);

    // dz_{t-1} = db + Q^T da2 + A^T da1.
    const std::vector<double> qt = matvec_t(p.Q, p.n, p.m, da2);
    const std::vector<double> at = matvec_t(p.A, p.n, p.m, da1);
    for (int i = 0; i < p.m; ++i) dz[i] = db[i] + qt[i] + at[i];
  }
}

void mlnet_grad_D(const MLNetParams& p, const LayerTape& tape,
                  const std::vector<double>& dloss_dxhat, MLNetGrads& grads) {
  if (tape.z.empty()) throw std::invalid_argument("mlnet_grad_D: empty tape");
  const std::vector<double>& zT = tape.z.back();
  const std::vector<double> pre = p.dict.multiply(zT);
  std::vector<double> dpre(pre.size());
  for (std::size_t i = 0; i < pre.size(); ++i)
    dpre[i] = dloss_dxhat[i] * rho_prime(pre[i], p.c);
  add_outer(grads.D, dpre, zT, 1.0);
}

double mlnet_sample_gradients(const MLNetParams& p, const Image& target,
                              const BitSummary& bits, LossKind kind, MLNetGrads& grads) {
  LayerTape tape;
  const Image xhat = mlnet_forward(p, bits, &tape);
  const double loss = mlnet_loss(xhat, target, kind);
  const std::vector<double> dx = mlnet_loss_grad(xhat, target, kind);

  mlnet_grad_D(p, tape, dx, grads);

  // Seed for the layer recursion: dz_T = D^T (dx . rho'(D z_T)).
  const std::vector<double> pre = p.dict.multiply(tape.z.back());
  std::vector<double> dpre(pre.size());
  for (std::size_t i = 0; i < pre.size(); ++i) dpre[i] = dx[i] * rho_prime(pre[i], p.c);
  const std::vector<double> dzT = p.dict.multiply_transpose(dpre);
  mlnet_backward(p, tape, bits, dzT, grads);
  return loss;
}

std::string tensor_kind_name(TensorKind k) {
  switch (k) {
    case TensorKind::W: return "W";
    case TensorKind::A: return "A";
    case TensorKind::Q: return "Q";
    case TensorKind::Theta: return "theta";
    case TensorKind::D: return "D";
  }
  return "?";
}

namespace {

double dataset_loss(const MLNetParams& p, const std::vector<TrainSample>& samples,
                    const std::vector<std::size_t>& indices, LossKind kind, int threads) {
  if (indices.empty()) return 0.0;
  std::vector<double> losses(indices.size(), 0.0);
  parallel_for(indices.size(), threads, [&](std::size_t i) {
    const TrainSample& s = samples[indices[i]];
    losses[i] = mlnet_loss(mlnet_forward(p, s.bits), s.target, kind);
  });
  double total = 0.0;
  for (double l : losses) total += l;
  return total / static_cast<double>(indices.size());
}

// Mean gradients over a batch. Samples are split into a fixed number of
// contiguous chunks with one accumulator each, and chunks are reduced in
// order, so the result does not depend on the thread count or schedule.
double batch_gradients(const MLNetParams& p, const std::vector<TrainSample>& samples,
                       const std::vector<std::size_t>& batch, LossKind kind, int threads,
                       MLNetGrads& out) {
  constexpr std::size_t kChunks = 16;
  const std::size_t chunks = std::min(kChunks, batch.size());
  const std::size_t per_chunk = (batch.size() + chunks - 1) / chunks;
  std::vector<MLNetGrads> partial(chunks);
  std::vector<double> losses(chunks, 0.0);

  parallel_for(chunks, threads, [&](std::size_t c) {
    const std::size_t begin = c * per_chunk;
    const std::size_t end = std::min(batch.size(), begin + per_chunk);
    partial[c].init_like(p);
    for (std::size_t i = begin; i < end; ++i) {
      const TrainSample& s = samples[batch[i]];
      losses[c] += mlnet_sample_gradients(p, s.target, s.bits, kind, partial[c]);
    }
  });

  out.init_like(p);
  double total = 0.0;
  const double scale = 1.0 / static_cast<double>(batch.size());
  for (std::size_t c = 0; c < chunks; ++c) {
    if (partial[c].A.empty()) continue;
    out.add_scaled(partial[c], scale);
    total += losses[c];
  }
  return total * scale;
}

double rms(const std::vector<double>& v) {
  double acc = 0.0;
  for (double x : v) acc += x * x;
  return std::sqrt(acc / static_cast<double>(std::max<std::size_t>(v.size(), 1)));
}

// Per-tensor relative scales frozen at initialization. The raw gradient
// magnitudes differ by orders of magnitude across {W, A, Q, theta, D} while
// the tensors themselves live on very different scales (W ~ eta D^T), so the
// update moves each tensor by rate * scale along the normalized direction.
struct UpdateScales {
  double W = 1.0, A = 1.0, Q = 1.0, theta = 1.0, D = 1.0;
  static UpdateScales from(const MLNetParams& p) {
    UpdateScales s;
    s.W = std::max(rms(p.W), 1e-8);
    s.A = std::max(rms(p.A), 1e-8);
    s.Q = std::max(rms(p.Q), 1e-8);
    s.theta = std::max(rms(p.theta), 1e-8);
    s.D = std::max(rms(p.dict.a), 1e-8);
    return s;
  }
};

void apply_update(MLNetParams& p, const MLNetGrads& g, TensorKind which, double rate,
                  const UpdateScales& scales) {
  auto step = [rate](std::vector<double>& dst, const std::vector<double>& grad,
                     double scale) {
    const double g_rms = rms(grad);
    if (!(g_rms > 0.0)) return;
    const double factor = rate * scale / g_rms;
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] -= factor * grad[i];
  };
  switch (which) {
    case TensorKind::W: step(p.W, g.W, scales.W); break;
    case TensorKind::A: step(p.A, g.A, scales.A); break;
    case TensorKind::Q: step(p.Q, g.Q, scales.Q); break;
    case TensorKind::Theta:
      step(p.theta, g.theta, scales.theta);
      for (double& t : p.theta) t = std::max(t, 0.0);
      break;
    case TensorKind::D:
      step(p.dict.a, g.D, scales.D);
      break;
  }
}

bool params_finite(const MLNetParams& p) {
  auto ok = [](const std::vector<double>& v) {
    for (double x : v)
      if (!std::isfinite(x)) return false;
    return true;
  };
  return ok(p.A) && ok(p.Q) && ok(p.W) && ok(p.theta) && ok(p.dict.a);
}

}  // namespace

std::pair<MLNetParams, TrainHistory> train_mlnet(const std::vector<TrainSample>& dataset,
                                                 const MLNetParams& init,
                                                 const TrainConfig& cfg) {
  validate(init);
  if (dataset.empty()) throw std::invalid_argument("train_mlnet: empty dataset");
  if (cfg.minibatch < 1) throw std::invalid_argument("train_mlnet: minibatch must be >= 1");
  if (!(cfg.learn_rate >= 0.0)) throw std::invalid_argument("train_mlnet: bad learning rate");
  if (cfg.round_robin.empty()) throw std::invalid_argument("train_mlnet: empty update order");
  if (!(cfg.validation_fraction >= 0.0 && cfg.validation_fraction < 1.0))
    throw std::invalid_argument("train_mlnet: validation fraction must be in [0,1)");

  // Deterministic split: a seeded permutation, validation taken from the tail.
  std::vector<std::size_t> order(dataset.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  CounterRng split_rng = CounterRng::keyed(cfg.seed, 0x73706C6974ull /* "split" */, 0);
  shuffle(order, split_rng);
  const std::size_t val_count =
      static_cast<std::size_t>(cfg.validation_fraction * static_cast<double>(order.size()));
  std::vector<std::size_t> train_idx(order.begin(), order.end() - val_count);
  std::vector<std::size_t> val_idx(order.end() - val_count, order.end());
  if (train_idx.empty()) throw std::invalid_argument("train_mlnet: no training samples left");

  MLNetParams current = init;
  const UpdateScales scales = UpdateScales::from(init);
  TrainHistory history;
  history.initial_validation =
      dataset_loss(current, dataset, val_idx.empty() ? train_idx : val_idx, cfg.loss,
                   cfg.threads);
  history.best_validation = history.initial_validation;

  MLNetParams best = current;
  double rate = cfg.learn_rate;
  int stall = 0;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const TensorKind phase = cfg.round_robin[epoch % cfg.round_robin.size()];
    CounterRng epoch_rng = CounterRng::keyed(cfg.seed, 0x65706F6368ull /* "epoch" */,
                                             static_cast<std::uint64_t>(epoch));
    std::vector<std::size_t> perm = train_idx;
    shuffle(perm, epoch_rng);

    double train_loss = 0.0;
    std::size_t batches = 0;
    for (std::size_t start = 0; start < perm.size(); start += cfg.minibatch) {
      const std::size_t end = std::min(perm.size(), start + cfg.minibatch);
      std::vector<std::size_t> batch(perm.begin() + start, perm.begin() + end);
      MLNetGrads grads;
      train_loss += batch_gradients(current, dataset, batch, cfg.loss, cfg.threads, grads);
      ++batches;
      apply_update(current, grads, phase, rate, scales);
      if (!params_finite(current)) {
        history.diverged = true;
        break;
      }
    }
    if (history.diverged) break;
    train_loss /= static_cast<double>(std::max<std::size_t>(batches, 1));

    const double val_loss =
        dataset_loss(current, dataset, val_idx.empty() ? train_idx : val_idx, cfg.loss,
                     cfg.threads);
    history.epochs.push_back({epoch, phase, train_loss, val_loss, rate});
    if (!std::isfinite(val_loss)) {
      history.diverged = true;
      break;
    }

    if (val_loss < history.best_validation) {
      history.best_validation = val_loss;
      history.best_epoch = epoch;
      best = current;
      stall = 0;
    } else if (++stall > cfg.patience) {
      rate *= cfg.rate_decay;
      stall = 0;
    }
  }
  return {std::move(best), std::move(history)};
}

void save_mlnet(const MLNetParams& p, const std::string& path) {
  validate(p);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("save_mlnet: cannot open " + path);
  out << "JOTNET 1\n";
  out << "layers=" << p.layers << "\n";
  out << "patch_side=" << p.dict.patch_side << "\n";
  out << "atom_count=" << p.m << "\n";
  out << "c=" << std::hexfloat << p.c << "\n";
  out << "init_eta=" << p.init_eta << "\n";
  out << "init_mu=" << p.init_mu << std::defaultfloat << "\n";
  out << "upsampling=" << p.op.upsampling() << "\n";
  out << "sigma=" << std::hexfloat << p.op.sigma() << std::defaultfloat << "\n";
  out << "round_robin=W,A,Q,theta,D\n";
  out << "---\n";

  auto dump = [&](const std::vector<double>& data, std::uint64_t rows, std::uint64_t cols) {
    Tensor t;
    t.type = Tensor::Type::Float64;
    t.shape = {rows, cols};
    t.f64 = data;
    write_tensor(t, out);
  };
  dump(p.A, p.n, p.m);
  dump(p.Q, p.n, p.m);
  dump(p.W, p.m, p.n);
  dump(p.theta, 1, p.m);
  dump(p.dict.a, p.n, p.m);
  if (!out) throw std::runtime_error("save_mlnet: write failed");
}

MLNetParams load_mlnet(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("load_mlnet: cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line != "JOTNET 1")
    throw std::runtime_error("load_mlnet: bad header in " + path);

  std::map<std::string, std::string> kv;
  while (std::getline(in, line)) {
    if (line == "---") break;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("load_mlnet: malformed manifest line: " + line);
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  auto need = [&](const std::string& key) {
    auto it = kv.find(key);
    if (it == kv.end()) throw std::runtime_error("load_mlnet: missing key " + key);
    return it->second;
  };

  MLNetParams p;
  p.layers = std::stoi(need("layers"));
  const int side = std::stoi(need("patch_side"));
  p.m = std::stoi(need("atom_count"));
  p.n = side * side;
  p.c = std::strtod(need("c").c_str(), nullptr);
  p.init_eta = std::strtod(need("init_eta").c_str(), nullptr);
  p.init_mu = std::strtod(need("init_mu").c_str(), nullptr);
  p.op = SensingOperator(std::stoi(need("upsampling")),
                         std::strtod(need("sigma").c_str(), nullptr));

  auto take = [&](std::uint64_t rows, std::uint64_t cols) {
    Tensor t = read_tensor(in);
    if (t.type != Tensor::Type::Float64 || t.shape.size() != 2 || t.shape[0] != rows ||
        t.shape[1] != cols)
      throw std::runtime_error("load_mlnet: tensor shape mismatch in " + path);
    return std::move(t.f64);
  };
  p.A = take(p.n, p.m);
  p.Q = take(p.n, p.m);
  p.W = take(p.m, p.n);
  p.theta = take(1, p.m);
  p.dict.patch_side = side;
  p.dict.atom_dim = p.n;
  p.dict.atom_count = p.m;
  p.dict.a = take(p.n, p.m);
  validate(p);
  return p;
}

}  // namespace jot
