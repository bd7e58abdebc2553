// jotrecon: simulate a dense one-bit threshold-pixel sensor and reconstruct
// the exposure image via ML, sparsity-regularized ML (ISTA/FISTA) or the
// trained unrolled network.
#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "jot/dictionary.hpp"
#include "jot/frames.hpp"
#include "jot/metrics.hpp"
#include "jot/mlnet.hpp"
#include "jot/pattern.hpp"
#include "jot/pgm.hpp"
#include "jot/reconstruct.hpp"
#include "jot/rng.hpp"
#include "jot/scene.hpp"
#include "jot/sensing.hpp"
#include "jot/solvers.hpp"
#include "jot/stack_io.hpp"
#include "jot/threads.hpp"

namespace {

using namespace jot;

std::vector<int> parse_int_list(const std::string& csv, const char* what) {
  std::vector<int> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      out.push_back(std::stoi(item));
    } catch (...) {
      throw std::invalid_argument(std::string(what) + ": bad integer '" + item + "'");
    }
  }
  if (out.empty()) throw std::invalid_argument(std::string(what) + ": empty list");
  return out;
}

std::vector<std::string> parse_str_list(const std::string& csv) {
  std::vector<std::string> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void write_report_csv(const SolverReport& report, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << "iteration,objective,eta,backtracks,step_reset,momentum_weight,seconds\n";
  char line[256];
  for (const IterationRecord& r : report.iterations) {
    std::snprintf(line, sizeof(line), "%d,%.17g,%.17g,%d,%d,%.17g,%.6f\n", r.iteration,
                  r.objective, r.eta, r.backtracks, r.step_reset ? 1 : 0,
                  r.momentum_weight, r.seconds);
    out << line;
  }
  if (!out) throw std::runtime_error("write failed for " + path);
}

// Shared acquisition settings.
struct SimOptions {
  std::string scene;
  double range = 10.0;
  int upsample = 5;
  double sigma = 3.0;
  std::string pattern_file;
  int frames = 4;
  std::uint64_t seed = 1;
};

void add_sim_options(CLI::App* cmd, SimOptions& o) {
  cmd->add_option("--scene", o.scene,
                  "scene source: synthetic:<W>x<H>:<seed>, a .pgm file, or a "
                  "float64 rank-2 .btsr tensor")
      ->required();
  cmd->add_option("--range", o.range, "scene intensity range maximum")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--upsample", o.upsample, "spatial oversampling factor s")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--sigma", o.sigma, "gaussian PSF std dev in sensor pixels")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--pattern", o.pattern_file, "threshold pattern file")->required();
  cmd->add_option("--frames", o.frames, "number of binary frames K")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", o.seed, "sampling seed");
}

struct Simulated {
  Image scene;
  Image rates;
  BinaryFrameStack stack;
  SensingOperator op = SensingOperator::identity();
};

Simulated run_simulation(const SimOptions& o, std::uint64_t seed_override) {
  Simulated sim;
  sim.scene = load_scene(o.scene, o.range);
  sim.op = SensingOperator(o.upsample, o.sigma);
  sim.rates = sim.op.apply(sim.scene);
  const ThresholdPattern pattern = load_pattern(o.pattern_file);
  sim.stack = sample_binary_frames(sim.rates, pattern, o.frames, seed_override);
  return sim;
}

Dictionary dictionary_for(const std::string& dict_file, int dct_atoms, int patch) {
  if (!dict_file.empty()) {
    Dictionary d = load_dictionary(dict_file);
    if (d.patch_side != patch)
      throw std::invalid_argument("dictionary patch side " + std::to_string(d.patch_side) +
                                  " does not match --patch " + std::to_string(patch));
    return d;
  }
  return make_dct_dictionary(patch, dct_atoms);
}

// Fixed step for network initialization: a power-iteration bound over a few
// representative patch problems.
double estimate_init_eta(const Dictionary& dict, const SensingOperator& op, double c,
                         const std::vector<TrainSample>& samples) {
  double lip = 0.0;
  const std::size_t probes = std::min<std::size_t>(samples.size(), 8);
  for (std::size_t i = 0; i < probes; ++i) {
    PatchProblem prob;
    prob.dict = &dict;
    prob.op = &op;
    prob.c = c;
    prob.bits = samples[i].bits;
    lip = std::max(lip, lipschitz_estimate(prob));
  }
  if (!(lip > 0.0)) throw std::runtime_error("step estimate failed: zero curvature");
  return 0.9 / lip;
}

int cmd_make_pattern(const std::string& out, const std::string& tile, int q_min, int q_max,
                     std::uint64_t seed, bool hdr, double lambda_max, int side) {
  ThresholdPattern p;
  if (hdr) {
    p = make_hdr_pattern(lambda_max, side);
  } else {
    const auto x_pos = tile.find('x');
    if (x_pos == std::string::npos)
      throw std::invalid_argument("--tile must look like 5x5");
    const int tw = std::stoi(tile.substr(0, x_pos));
    const int th = std::stoi(tile.substr(x_pos + 1));
    p = make_uniform_pattern(tw, th, q_min, q_max, seed);
  }
  save_pattern(p, out);
  std::printf("pattern %dx%d written to %s\n", p.tile_h, p.tile_w, out.c_str());
  return 0;
}

int cmd_simulate(const SimOptions& o, const std::string& out_prefix) {
  const Simulated sim = run_simulation(o, o.seed);
  Manifest m;
  m["format_version"] = "1";
  m["scene"] = o.scene;
  m["range_max"] = std::to_string(o.range);
  m["upsampling"] = std::to_string(o.upsample);
  m["sigma"] = std::to_string(o.sigma);
  m["pattern"] = o.pattern_file;
  m["frames"] = std::to_string(o.frames);
  m["seed"] = std::to_string(o.seed);
  m["low_width"] = std::to_string(sim.scene.width);
  m["low_height"] = std::to_string(sim.scene.height);
  write_stack_files(out_prefix, sim.stack, sim.rates, sim.scene, m);
  std::printf("simulated %dx%d scene -> %dx%d stack, K=%d, files %s.{gt,rates,bits,qmap}.btsr\n",
              sim.scene.width, sim.scene.height, sim.stack.width, sim.stack.height,
              sim.stack.frames, out_prefix.c_str());
  return 0;
}

int cmd_make_dataset(const SimOptions& o, int count, int patch, const std::string& out_dir) {
  const ThresholdPattern pattern = load_pattern(o.pattern_file);
  const SensingOperator op(o.upsample, o.sigma);
  const int scene_side = 4 * patch;
  const int per_scene = 16;
  std::vector<TrainSample> samples;
  samples.reserve(count);
  // Each synthetic scene contributes per_scene random patch positions, so the
  // tiling phases and border statistics match what reconstruction sees.
  const int scenes = (count + per_scene - 1) / per_scene;
  for (int s = 0; s < scenes; ++s) {
    const Image scene =
        make_test_scene(scene_side, scene_side, o.range, mix64(o.seed) + 7919ull * s);
    const Image rates = op.apply(scene);
    const BinaryFrameStack stack =
        sample_binary_frames(rates, pattern, o.frames, mix64(o.seed ^ 0xD5ull) + s);
    const BitSummary bits = summarize(stack);
    CounterRng pos_rng = CounterRng::keyed(o.seed, 0x706F73ull, s);
    for (int j = 0; j < per_scene && static_cast<int>(samples.size()) < count; ++j) {
      const int x0 = static_cast<int>(pos_rng.next_below(scene_side - patch + 1));
      const int y0 = static_cast<int>(pos_rng.next_below(scene_side - patch + 1));
      TrainSample sample;
      sample.target = crop(scene, x0, y0, patch, patch);
      sample.bits = crop(bits, x0 * o.upsample, y0 * o.upsample, patch * o.upsample,
                         patch * o.upsample);
      samples.push_back(std::move(sample));
    }
  }

  Manifest m;
  m["format_version"] = "1";
  m["count"] = std::to_string(samples.size());
  m["patch"] = std::to_string(patch);
  m["upsampling"] = std::to_string(o.upsample);
  m["sigma"] = std::to_string(o.sigma);
  m["range_max"] = std::to_string(o.range);
  m["frames"] = std::to_string(o.frames);
  m["pattern"] = o.pattern_file;
  m["seed"] = std::to_string(o.seed);
  write_dataset(out_dir, samples, m);
  std::printf("dataset with %zu patch pairs written to %s\n", samples.size(),
              out_dir.c_str());
  return 0;
}

struct TrainCli {
  std::string dataset;
  std::string dict_file;
  int dct_atoms = 16;
  int layers = 4;
  double c = 10.0;
  double mu = 4.0;
  int epochs = 60;
  int minibatch = 50;
  double lr = 1e-5;
  double val_fraction = 0.2;
  int patience = 4;
  double rate_decay = 0.5;
  std::string loss = "mse";
  std::uint64_t seed = 0;
  int threads = default_thread_count();
  std::string out;
  std::string history;
};

int cmd_train(const TrainCli& t) {
  const Dataset ds = read_dataset(t.dataset);
  if (ds.samples.empty()) throw std::invalid_argument("train: empty dataset");
  const int patch = ds.samples.front().target.width;
  const int upsample = std::stoi(ds.manifest.at("upsampling"));
  const double sigma = std::stod(ds.manifest.at("sigma"));
  const SensingOperator op(upsample, sigma);
  const Dictionary dict = dictionary_for(t.dict_file, t.dct_atoms, patch);

  const double eta = estimate_init_eta(dict, op, t.c, ds.samples);
  MLNetParams init = ista_init(dict, op, t.c, eta, t.mu, t.layers);

  TrainConfig cfg;
  cfg.minibatch = t.minibatch;
  cfg.learn_rate = t.lr;
  cfg.epochs = t.epochs;
  cfg.validation_fraction = t.val_fraction;
  cfg.patience = t.patience;
  cfg.rate_decay = t.rate_decay;
  cfg.loss = t.loss == "log_mse" ? LossKind::LogMse : LossKind::Mse;
  if (t.loss != "mse" && t.loss != "log_mse")
    throw std::invalid_argument("train: --loss must be mse or log_mse");
  cfg.seed = t.seed;
  cfg.threads = t.threads;

  const auto [best, history] = train_mlnet(ds.samples, init, cfg);
  save_mlnet(best, t.out);

  if (!t.history.empty()) {
    std::ofstream out(t.history);
    if (!out) throw std::runtime_error("cannot open " + t.history);
    out << "epoch,phase,train_loss,validation_loss,learn_rate\n";
    char line[192];
    for (const EpochRecord& e : history.epochs) {
      std::snprintf(line, sizeof(line), "%d,%s,%.17g,%.17g,%.17g\n", e.epoch,
                    tensor_kind_name(e.phase).c_str(), e.train_loss, e.validation_loss,
                    e.learn_rate);
      out << line;
    }
  }
  std::printf("eta=%.6g initial_validation=%.6g best_validation=%.6g best_epoch=%d%s\n", eta,
              history.initial_validation, history.best_validation, history.best_epoch,
              history.diverged ? " (DIVERGED)" : "");
  if (history.diverged) throw std::runtime_error("training diverged; history written");
  std::printf("parameters written to %s\n", t.out.c_str());
  return 0;
}

struct ReconstructCli {
  std::string stack_prefix;
  std::string method = "fista";
  std::string dict_file;
  int dct_atoms = 16;
  std::string params_file;
  int patch = 8;
  int stride = 8;
  double c = 10.0;
  double mu = 4.0;
  double eta0 = 1.0;
  double beta = 0.5;
  double fixed_step = 0.0;
  int iters = 2000;
  double tol = 1e-8;
  int step_reset = 0;
  int layers = -1;
  int threads = default_thread_count();
  std::string out;
  std::string report;
  std::string pgm;
};

ReconstructResult reconstruct_from_cli(const ReconstructCli& r, const StackFiles& files) {
  const int upsample = std::stoi(files.manifest.at("upsampling"));
  const double sigma = std::stod(files.manifest.at("sigma"));
  const SensingOperator op(upsample, sigma);

  ReconstructConfig cfg;
  cfg.method = method_from_name(r.method);
  cfg.patch = r.patch;
  cfg.stride = r.stride;
  cfg.c = r.c;
  cfg.threads = r.threads;
  cfg.mlnet_layers = r.layers;
  cfg.solver.mu = r.mu;
  cfg.solver.eta0 = r.eta0;
  cfg.solver.beta = r.beta;
  cfg.solver.fixed_step = r.fixed_step;
  cfg.solver.max_iters = r.iters;
  cfg.solver.tolerance = r.tol;
  cfg.solver.variant = cfg.method == Method::Ista ? SolverVariant::Ista
                                                  : SolverVariant::Fista;
  if (r.step_reset > 0) {
    cfg.solver.variant = SolverVariant::FistaStepReset;
    cfg.solver.reset_period = r.step_reset;
  }
  cfg.ml.max_iters = r.iters;
  cfg.ml.tolerance = r.tol;
  cfg.ml.eta0 = r.eta0;
  cfg.ml.beta = r.beta;

  const BitSummary bits = summarize(files.stack);
  Dictionary dict;
  MLNetParams net;
  const Dictionary* dict_ptr = nullptr;
  const MLNetParams* net_ptr = nullptr;
  if (cfg.method == Method::Ista || cfg.method == Method::Fista) {
    dict = dictionary_for(r.dict_file, r.dct_atoms, r.patch);
    dict_ptr = &dict;
  } else if (cfg.method == Method::Mlnet) {
    if (r.params_file.empty())
      throw std::invalid_argument("reconstruct: --params is required for mlnet");
    net = load_mlnet(r.params_file);
    if (net.op.upsampling() != upsample)
      throw std::invalid_argument("reconstruct: params upsampling does not match stack");
    net_ptr = &net;
    cfg.patch = net.dict.patch_side;
  }
  return reconstruct_image(bits, op, dict_ptr, net_ptr, cfg);
}

int cmd_reconstruct(const ReconstructCli& r) {
  const StackFiles files = read_stack_files(r.stack_prefix);
  const ReconstructResult res = reconstruct_from_cli(r, files);
  if (res.merged.failed) throw std::runtime_error("reconstruct: " + res.merged.failure);
  write_image_tensor(res.image, r.out);
  if (!r.report.empty()) write_report_csv(res.merged, r.report);
  if (!r.pgm.empty()) {
    const double range = std::stod(files.manifest.at("range_max"));
    Image scaled = res.image;
    for (double& v : scaled.v) v = v / range * 255.0;
    write_pgm(scaled, 255, r.pgm);
  }
  const double db = psnr(res.image, files.ground_truth,
                         std::stod(files.manifest.at("range_max")));
  std::printf("method=%s iterations=%d seconds=%.3f psnr_db=%.4f -> %s\n", r.method.c_str(),
              res.merged.total_iterations, res.merged.seconds, db, r.out.c_str());
  return 0;
}

int cmd_psnr(const std::string& estimate, const std::string& reference, double peak,
             bool log_scale) {
  auto load = [](const std::string& path) {
    if (path.size() >= 4 && path.substr(path.size() - 4) == ".pgm")
      return read_pgm(path).pixels;
    return read_image_tensor(path);
  };
  const Image a = load(estimate);
  const Image b = load(reference);
  const double db = log_scale ? log_psnr(a, b, peak) : psnr(a, b, peak);
  if (std::isinf(db))
    std::printf("psnr_db=inf\n");
  else
    std::printf("psnr_db=%.6f\n", db);
  return 0;
}

struct SweepCli {
  SimOptions sim;
  std::string k_list = "1,4,16,64";
  std::string methods = "ml,fista";
  int seeds = 5;
  double mu = 4.0;
  double c = 10.0;
  int patch = 8;
  int stride = 8;
  std::string dict_file;
  int dct_atoms = 16;
  std::string params_file;
  int iters = 2000;
  double tol = 1e-8;
  int threads = default_thread_count();
  std::string out;
};

int cmd_sweep_exposures(const SweepCli& s) {
  std::vector<int> ks_raw = parse_int_list(s.k_list, "--k-list");
  std::vector<int> ks;
  std::set<int> seen;
  for (int k : ks_raw) {
    if (k < 1) throw std::invalid_argument("--k-list: K must be >= 1");
    if (!seen.insert(k).second) {
      std::fprintf(stderr, "warning: duplicate K=%d ignored\n", k);
      continue;
    }
    ks.push_back(k);
  }
  const auto methods = parse_str_list(s.methods);
  if (methods.empty()) throw std::invalid_argument("--methods: empty");

  std::ofstream out(s.out);
  if (!out) throw std::runtime_error("cannot open " + s.out);
  out << "k,method,seed,psnr_db\n";

  const Image scene = load_scene(s.sim.scene, s.sim.range);
  const SensingOperator op(s.sim.upsample, s.sim.sigma);
  const Image rates = op.apply(scene);
  const ThresholdPattern pattern = load_pattern(s.sim.pattern_file);

  for (int seed_idx = 0; seed_idx < s.seeds; ++seed_idx) {
    for (int k : ks) {
      const BinaryFrameStack stack = sample_binary_frames(
          rates, pattern, k, mix64(s.sim.seed + 0x5157ull * seed_idx) + k);
      const BitSummary bits = summarize(stack);
      for (const std::string& method : methods) {
        ReconstructCli rc;
        rc.method = method;
        rc.patch = s.patch;
        rc.stride = s.stride;
        rc.c = s.c;
        rc.mu = s.mu;
        rc.iters = s.iters;
        rc.tol = s.tol;
        rc.threads = s.threads;
        rc.dict_file = s.dict_file;
        rc.dct_atoms = s.dct_atoms;
        rc.params_file = s.params_file;

        ReconstructConfig cfg;
        cfg.method = method_from_name(method);
        cfg.patch = rc.patch;
        cfg.stride = rc.stride;
        cfg.c = rc.c;
        cfg.threads = rc.threads;
        cfg.solver.mu = rc.mu;
        cfg.solver.max_iters = rc.iters;
        cfg.solver.tolerance = rc.tol;
        cfg.solver.variant =
            cfg.method == Method::Ista ? SolverVariant::Ista : SolverVariant::Fista;
        cfg.ml.max_iters = rc.iters;
        cfg.ml.tolerance = rc.tol;

        Dictionary dict;
        MLNetParams net;
        const Dictionary* dict_ptr = nullptr;
        const MLNetParams* net_ptr = nullptr;
        if (cfg.method == Method::Ista || cfg.method == Method::Fista) {
          dict = dictionary_for(s.dict_file, s.dct_atoms, s.patch);
          dict_ptr = &dict;
        } else if (cfg.method == Method::Mlnet) {
          if (s.params_file.empty())
            throw std::invalid_argument("sweep: --params required for mlnet");
          net = load_mlnet(s.params_file);
          net_ptr = &net;
          cfg.patch = net.dict.patch_side;
        }
        const ReconstructResult res = reconstruct_image(bits, op, dict_ptr, net_ptr, cfg);
        const double db = psnr(res.image, scene, s.sim.range);
        char line[128];
        std::snprintf(line, sizeof(line), "%d,%s,%d,%.6f\n", k, method.c_str(), seed_idx,
                      db);
        out << line;
        out.flush();
      }
    }
  }
  std::printf("sweep written to %s\n", s.out.c_str());
  return 0;
}

struct DepthCli {
  SimOptions sim;
  std::string depths = "1,2,4,6,8";
  double mu = 4.0;
  double c = 10.0;
  int patch = 8;
  int stride = 8;
  std::string dict_file;
  int dct_atoms = 16;
  std::string params_file;
  int threads = default_thread_count();
  std::string out;
};

int cmd_sweep_depth(const DepthCli& d) {
  const std::vector<int> depths = parse_int_list(d.depths, "--depths");
  const Simulated sim = run_simulation(d.sim, d.sim.seed);
  const BitSummary bits = summarize(sim.stack);

  Dictionary dict = dictionary_for(d.dict_file, d.dct_atoms, d.patch);
  MLNetParams net;
  if (!d.params_file.empty()) {
    net = load_mlnet(d.params_file);
  } else {
    // untrained network: ISTA initialization with an estimated fixed step
    PatchProblem probe;
    probe.dict = &dict;
    probe.op = &sim.op;
    probe.c = d.c;
    probe.bits = crop(bits, 0, 0, d.patch * d.sim.upsample, d.patch * d.sim.upsample);
    const double eta = 0.9 / lipschitz_estimate(probe);
    net = ista_init(dict, sim.op, d.c, eta, d.mu, 1);
  }

  std::ofstream out(d.out);
  if (!out) throw std::runtime_error("cannot open " + d.out);
  out << "budget,method,psnr_db,seconds\n";
  char line[160];

  ReconstructConfig base;
  base.patch = d.patch;
  base.stride = d.stride;
  base.c = d.c;
  base.threads = d.threads;
  base.solver.mu = d.mu;
  base.solver.tolerance = 0.0;  // run the full budget

  for (int t : depths) {
    for (const std::string& method : {std::string("mlnet"), std::string("ista"),
                                      std::string("fista")}) {
      ReconstructConfig cfg = base;
      cfg.method = method_from_name(method);
      if (cfg.method == Method::Mlnet) {
        cfg.mlnet_layers = t;
        cfg.patch = net.dict.patch_side;
      } else {
        cfg.solver.max_iters = t;
        cfg.solver.variant =
            cfg.method == Method::Ista ? SolverVariant::Ista : SolverVariant::Fista;
      }
      const ReconstructResult res = reconstruct_image(
          bits, sim.op, cfg.method == Method::Mlnet ? nullptr : &dict,
          cfg.method == Method::Mlnet ? &net : nullptr, cfg);
      const double db = psnr(res.image, sim.scene, d.sim.range);
      std::snprintf(line, sizeof(line), "%d,%s,%.6f,%.6f\n", t, method.c_str(), db,
                    res.merged.seconds);
      out << line;
      out.flush();
    }
  }
  // unregularized ML reference at full budget
  ReconstructConfig ml = base;
  ml.method = Method::Ml;
  ml.ml.max_iters = 2000;
  ml.ml.tolerance = 1e-8;
  const ReconstructResult res = reconstruct_image(bits, sim.op, nullptr, nullptr, ml);
  std::snprintf(line, sizeof(line), "%d,ml,%.6f,%.6f\n", res.merged.total_iterations,
                psnr(res.image, sim.scene, d.sim.range), res.merged.seconds);
  out << line;
  std::printf("depth sweep written to %s\n", d.out.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "jotrecon: one-bit threshold-pixel sensor simulation and exposure reconstruction"};
  app.require_subcommand(1);
  app.set_config("--config", "",
                 "flat key=value config file with dotted keys, e.g. simulate.scene=...;\n"
                 "give it before the subcommand; command-line flags override");

  // make-pattern
  std::string mp_out, mp_tile = "5x5";
  int mp_qmin = 1, mp_qmax = 10, mp_side = 13;
  std::uint64_t mp_seed = 0;
  bool mp_hdr = false;
  double mp_lambda_max = 1e5;
  auto* mp = app.add_subcommand("make-pattern", "create a threshold pattern file");
  mp->add_option("--out", mp_out, "output pattern file")->required();
  mp->add_option("--tile", mp_tile, "tile size WxH for the uniform pattern");
  mp->add_option("--q-min", mp_qmin, "lowest threshold level");
  mp->add_option("--q-max", mp_qmax, "highest threshold level");
  mp->add_option("--seed", mp_seed, "placement seed");
  mp->add_flag("--hdr", mp_hdr, "greedy HDR covering pattern instead of uniform levels");
  mp->add_option("--lambda-max", mp_lambda_max, "HDR dynamic range maximum");
  mp->add_option("--side", mp_side, "HDR tile side length");
  mp->callback([&]() { cmd_make_pattern(mp_out, mp_tile, mp_qmin, mp_qmax, mp_seed, mp_hdr,
                                        mp_lambda_max, mp_side); });

  // simulate
  SimOptions sim;
  std::string sim_out;
  auto* sc = app.add_subcommand("simulate",
                                "sample a binary frame stack from a scene; writes "
                                "<out>.{gt,rates,bits,qmap}.btsr and <out>.manifest.txt");
  add_sim_options(sc, sim);
  sc->add_option("--out", sim_out, "output file prefix")->required();
  sc->callback([&]() { cmd_simulate(sim, sim_out); });

  // make-dataset
  SimOptions ds_sim;
  int ds_count = 2500, ds_patch = 8;
  std::string ds_out;
  auto* dc = app.add_subcommand("make-dataset",
                                "generate (ground-truth patch, binary patch stack) "
                                "training pairs from synthetic scenes");
  dc->add_option("--range", ds_sim.range, "scene intensity range maximum")
      ->check(CLI::PositiveNumber);
  dc->add_option("--upsample", ds_sim.upsample, "spatial oversampling factor s")
      ->check(CLI::PositiveNumber);
  dc->add_option("--sigma", ds_sim.sigma, "gaussian PSF std dev in sensor pixels")
      ->check(CLI::PositiveNumber);
  dc->add_option("--pattern", ds_sim.pattern_file, "threshold pattern file")->required();
  dc->add_option("--frames", ds_sim.frames, "number of binary frames K")
      ->check(CLI::PositiveNumber);
  dc->add_option("--seed", ds_sim.seed, "scene and sampling seed");
  dc->add_option("--count", ds_count, "number of patch pairs")->check(CLI::PositiveNumber);
  dc->add_option("--patch", ds_patch, "patch side length")->check(CLI::PositiveNumber);
  dc->add_option("--out", ds_out, "output dataset directory")->required();
  dc->callback([&]() { cmd_make_dataset(ds_sim, ds_count, ds_patch, ds_out); });

  // train
  TrainCli tr;
  auto* tc = app.add_subcommand("train", "train the unrolled network on a dataset");
  tc->add_option("--dataset", tr.dataset, "dataset directory from make-dataset")->required();
  tc->add_option("--dict", tr.dict_file, "dictionary file (default: overcomplete DCT)");
  tc->add_option("--dct-atoms", tr.dct_atoms, "atoms per axis for the default DCT");
  tc->add_option("--layers", tr.layers, "network depth T")->check(CLI::NonNegativeNumber);
  tc->add_option("--c", tr.c, "intensity transform scale");
  tc->add_option("--mu", tr.mu, "l1 weight used for the ISTA initialization");
  tc->add_option("--epochs", tr.epochs, "training epochs (one tensor phase each)");
  tc->add_option("--minibatch", tr.minibatch, "minibatch size");
  tc->add_option("--lr", tr.lr, "learning rate");
  tc->add_option("--val-fraction", tr.val_fraction, "validation fraction");
  tc->add_option("--patience", tr.patience, "epochs without improvement before decay");
  tc->add_option("--rate-decay", tr.rate_decay, "learning-rate decay factor");
  tc->add_option("--loss", tr.loss, "loss kind: mse or log_mse");
  tc->add_option("--seed", tr.seed, "training seed");
  tc->add_option("--threads", tr.threads, "worker threads (default JOTRECON_THREADS)");
  tc->add_option("--out", tr.out, "output parameter file")->required();
  tc->add_option("--history", tr.history, "per-epoch loss CSV");
  tc->callback([&]() { cmd_train(tr); });

  // reconstruct
  ReconstructCli rc;
  auto* xc = app.add_subcommand("reconstruct", "reconstruct the exposure from a stack");
  xc->add_option("--stack", rc.stack_prefix, "stack file prefix from simulate")->required();
  xc->add_option("--method", rc.method, "ml | ista | fista | mlnet");
  xc->add_option("--dict", rc.dict_file, "dictionary file (default: overcomplete DCT)");
  xc->add_option("--dct-atoms", rc.dct_atoms, "atoms per axis for the default DCT");
  xc->add_option("--params", rc.params_file, "network parameters (for mlnet)");
  xc->add_option("--patch", rc.patch, "patch side length");
  xc->add_option("--stride", rc.stride, "patch stride (stride < patch overlaps)");
  xc->add_option("--c", rc.c, "intensity transform scale");
  xc->add_option("--mu", rc.mu, "l1 regularization weight");
  xc->add_option("--eta0", rc.eta0, "initial step size");
  xc->add_option("--beta", rc.beta, "backtracking shrink factor");
  xc->add_option("--fixed-step", rc.fixed_step,
                 "use this constant step and skip backtracking");
  xc->add_option("--iters", rc.iters, "iteration budget")->check(CLI::NonNegativeNumber);
  xc->add_option("--tol", rc.tol, "relative objective-change tolerance");
  xc->add_option("--step-reset", rc.step_reset,
                 "reset eta to eta0 every N iterations (fista variant)");
  xc->add_option("--layers", rc.layers, "override network depth (mlnet)");
  xc->add_option("--threads", rc.threads, "worker threads (default JOTRECON_THREADS)");
  xc->add_option("--out", rc.out, "output image tensor")->required();
  xc->add_option("--report", rc.report,
                 "per-iteration CSV: iteration,objective,eta,backtracks,step_reset,"
                 "momentum_weight,seconds");
  xc->add_option("--pgm", rc.pgm, "also write an 8-bit PGM preview");
  xc->callback([&]() { cmd_reconstruct(rc); });

  // psnr
  std::string ps_est, ps_ref;
  double ps_peak = 10.0;
  bool ps_log = false;
  auto* pc = app.add_subcommand("psnr", "peak signal-to-noise ratio between two images");
  pc->add_option("estimate", ps_est, "estimate image (.btsr or .pgm)")->required();
  pc->add_option("reference", ps_ref, "reference image (.btsr or .pgm)")->required();
  pc->add_option("--peak", ps_peak, "peak value (scene range maximum)");
  pc->add_flag("--log", ps_log, "compute on log(1+x) intensities");
  pc->callback([&]() { cmd_psnr(ps_est, ps_ref, ps_peak, ps_log); });

  // sweep-exposures
  SweepCli sw;
  auto* swc = app.add_subcommand("sweep-exposures",
                                 "PSNR vs number of exposures K; CSV k,method,seed,psnr_db");
  add_sim_options(swc, sw.sim);
  swc->add_option("--k-list", sw.k_list, "comma-separated exposure counts");
  swc->add_option("--methods", sw.methods, "comma-separated methods");
  swc->add_option("--seeds", sw.seeds, "number of sampling seeds")->check(CLI::PositiveNumber);
  swc->add_option("--mu", sw.mu, "l1 weight");
  swc->add_option("--c", sw.c, "intensity scale");
  swc->add_option("--patch", sw.patch, "patch side");
  swc->add_option("--stride", sw.stride, "patch stride");
  swc->add_option("--dict", sw.dict_file, "dictionary file");
  swc->add_option("--dct-atoms", sw.dct_atoms, "atoms per axis for the default DCT");
  swc->add_option("--params", sw.params_file, "network parameters (for mlnet)");
  swc->add_option("--iters", sw.iters, "solver budget");
  swc->add_option("--tol", sw.tol, "solver tolerance");
  swc->add_option("--threads", sw.threads, "worker threads");
  swc->add_option("--out", sw.out, "output CSV")->required();
  swc->callback([&]() { cmd_sweep_exposures(sw); });

  // sweep-depth
  DepthCli dp;
  auto* dpc = app.add_subcommand("sweep-depth",
                                 "PSNR vs depth/budget; CSV budget,method,psnr_db,seconds");
  add_sim_options(dpc, dp.sim);
  dpc->add_option("--depths", dp.depths, "comma-separated depths / iteration budgets");
  dpc->add_option("--mu", dp.mu, "l1 weight");
  dpc->add_option("--c", dp.c, "intensity scale");
  dpc->add_option("--patch", dp.patch, "patch side");
  dpc->add_option("--stride", dp.stride, "patch stride");
  dpc->add_option("--dict", dp.dict_file, "dictionary file");
  dpc->add_option("--dct-atoms", dp.dct_atoms, "atoms per axis for the default DCT");
  dpc->add_option("--params", dp.params_file, "trained network parameters");
  dpc->add_option("--threads", dp.threads, "worker threads");
  dpc->add_option("--out", dp.out, "output CSV")->required();
  dpc->callback([&]() { cmd_sweep_depth(dp); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::domain_error& e) {
    std::fprintf(stderr, "numeric failure: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
  return 0;
}
