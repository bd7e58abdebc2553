#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "jot/dictionary.hpp"
#include "jot/frames.hpp"
#include "jot/image.hpp"
#include "jot/sensing.hpp"

namespace jot {

/// Parameters of the unrolled network. Layers are recurrent: a single
/// (A, Q, W, theta) set is shared by all T layers; D maps the final code to
/// the output patch. Shapes: A, Q are n x m, W is m x n, theta is length m
/// with nonnegative entries, where n = patch_side^2 and m = atom count.
struct MLNetParams {
  int layers = 0;
  int n = 0;
  int m = 0;
  double c = 10.0;
  double init_eta = 0.0;  // step/weight the init was derived from (provenance)
  double init_mu = 0.0;
  SensingOperator op = SensingOperator::identity();
  Dictionary dict;             // D
  std::vector<double> A, Q;    // n x m row-major
  std::vector<double> W;       // m x n row-major
  std::vector<double> theta;   // m
};

void validate(const MLNetParams& p);

/// A = Q = D, W = eta D^T, theta = mu eta 1: with these values a T-layer
/// forward pass reproduces T fixed-step ISTA iterations exactly.
MLNetParams ista_init(const Dictionary& dict, const SensingOperator& op, double c,
                      double eta, double mu, int layers);

/// Forward-pass bookkeeping: z_0..z_T and the pre-shrinkage b_1..b_T.
struct LayerTape {
  std::vector<std::vector<double>> z;
  std::vector<std::vector<double>> b;
};

/// Run the T-layer forward pass on one patch's bits; returns the
/// reconstructed patch rho(D z_T) and optionally the tape.
Image mlnet_forward(const MLNetParams& p, const BitSummary& bits, LayerTape* tape = nullptr);

enum class LossKind { Mse, LogMse };

/// Per-sample loss: 0.5 ||x* - xhat||^2, or the same on log(1+.) intensities.
double mlnet_loss(const Image& xhat, const Image& target, LossKind kind);

/// d loss / d xhat.
std::vector<double> mlnet_loss_grad(const Image& xhat, const Image& target, LossKind kind);

struct MLNetGrads {
  std::vector<double> A, Q, W, theta, D;
  void init_like(const MLNetParams& p);
  void add_scaled(const MLNetGrads& other, double scale);
};

/// Backpropagate d loss / d z_T through the T layers, accumulating gradients
/// for W, A, Q and theta into `grads`. The likelihood enters only through its
/// per-pixel first and second derivatives.
void mlnet_backward(const MLNetParams& p, const LayerTape& tape, const BitSummary& bits,
                    const std::vector<double>& dloss_dzT, MLNetGrads& grads);

/// dD depends only on the last iterate: dD = (dloss_dxhat . rho'(D z_T)) z_T^T.
void mlnet_grad_D(const MLNetParams& p, const LayerTape& tape,
                  const std::vector<double>& dloss_dxhat, MLNetGrads& grads);

/// Convenience: forward + loss seed + backward + dD for one (target, bits)
/// sample. Returns the sample loss.
double mlnet_sample_gradients(const MLNetParams& p, const Image& target,
                              const BitSummary& bits, LossKind kind, MLNetGrads& grads);

enum class TensorKind { W, A, Q, Theta, D };
std::string tensor_kind_name(TensorKind k);

struct TrainSample {
  Image target;     // low-resolution ground-truth patch
  BitSummary bits;  // sensor-domain binary measurements
};

struct TrainConfig {
  int minibatch = 50;
  double learn_rate = 1e-3;
  int epochs = 50;
  std::vector<TensorKind> round_robin = {TensorKind::W, TensorKind::A, TensorKind::Q,
                                         TensorKind::Theta, TensorKind::D};
  double validation_fraction = 0.2;
  int patience = 4;        // epochs without improvement before decaying the rate
  double rate_decay = 0.5;
  LossKind loss = LossKind::Mse;
  std::uint64_t seed = 0;
  int threads = 1;
};

struct EpochRecord {
  int epoch = 0;
  TensorKind phase = TensorKind::W;
  double train_loss = 0.0;
  double validation_loss = 0.0;
  double learn_rate = 0.0;
};

struct TrainHistory {
  std::vector<EpochRecord> epochs;
  double initial_validation = 0.0;
  double best_validation = 0.0;
  int best_epoch = -1;  // -1 means the init was never improved on
  bool diverged = false;
};

/// Stochastic gradient training with round-robin tensor updates: each epoch
/// updates exactly one of {W, A, Q, theta, D} in the configured cyclic order.
/// Returns the best-validation parameters. Deterministic given the seed.
std::pair<MLNetParams, TrainHistory> train_mlnet(const std::vector<TrainSample>& dataset,
                                                 const MLNetParams& init,
                                                 const TrainConfig& cfg);

/// Single-file serialization: a text manifest followed by the five tensors.
void save_mlnet(const MLNetParams& p, const std::string& path);
MLNetParams load_mlnet(const std::string& path);

}  // namespace jot
