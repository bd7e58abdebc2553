#include "jot/reconstruct.hpp"

#include <chrono>
#include <stdexcept>

#include "jot/rho.hpp"
#include "jot/synthesis.hpp"
#include "jot/threads.hpp"

namespace jot {

Method method_from_name(const std::string& name) {
  if (name == "ml") return Method::Ml;
  if (name == "ista") return Method::Ista;
  if (name == "fista") return Method::Fista;
  if (name == "mlnet") return Method::Mlnet;
  throw std::invalid_argument("unknown method: " + name + " (want ml|ista|fista|mlnet)");
}

std::string method_name(Method m) {
  switch (m) {
    case Method::Ml: return "ml";
    case Method::Ista: return "ista";
    case Method::Fista: return "fista";
    case Method::Mlnet: return "mlnet";
  }
  return "?";
}

ReconstructResult reconstruct_image(const BitSummary& bits, const SensingOperator& op,
                                    const Dictionary* dict, const MLNetParams* net,
                                    const ReconstructConfig& cfg) {
  const int s = op.upsampling();
  if (bits.width % s != 0 || bits.height % s != 0)
    throw std::invalid_argument("reconstruct: stack dimensions not divisible by s");
  const int low_w = bits.width / s;
  const int low_h = bits.height / s;

  ReconstructResult res;

  if (cfg.method == Method::Ml) {
    Image x0(low_w, low_h, cfg.c);
    MlResult ml = solve_ml_unregularized(bits, op, cfg.ml, x0);
    res.image = std::move(ml.x);
    res.patch_reports.push_back(ml.report);
    res.merged = std::move(ml.report);
    return res;
  }

  const PatchGrid grid(low_w, low_h, cfg.patch, cfg.stride);
  std::vector<Image> patches(grid.count());
  std::vector<SolverReport> reports(grid.count());

  if (cfg.method == Method::Mlnet) {
    if (!net) throw std::invalid_argument("reconstruct: mlnet method needs parameters");
    MLNetParams params = *net;
    if (cfg.mlnet_layers >= 0) params.layers = cfg.mlnet_layers;
    if (params.dict.patch_side != cfg.patch)
      throw std::invalid_argument("reconstruct: params patch side does not match config");
    const auto t0 = std::chrono::steady_clock::now();
    parallel_for(grid.count(), cfg.threads, [&](std::size_t i) {
      const auto [x0, y0] = grid.position(i);
      const BitSummary region = crop(bits, x0 * s, y0 * s, cfg.patch * s, cfg.patch * s);
      patches[i] = mlnet_forward(params, region);
      reports[i].total_iterations = params.layers;
      reports[i].converged = true;
    });
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    res.image = aggregate_patches(patches, grid);
    res.merged = merge_reports(reports);
    res.merged.seconds = elapsed;
    res.patch_reports = std::move(reports);
    return res;
  }

  if (!dict) throw std::invalid_argument("reconstruct: regularized methods need a dictionary");
  if (dict->patch_side != cfg.patch)
    throw std::invalid_argument("reconstruct: dictionary patch side does not match config");

  parallel_for(grid.count(), cfg.threads, [&](std::size_t i) {
    const auto [x0, y0] = grid.position(i);
    PatchProblem prob;
    prob.dict = dict;
    prob.op = &op;
    prob.c = cfg.c;
    prob.bits = crop(bits, x0 * s, y0 * s, cfg.patch * s, cfg.patch * s);
    try {
      SolveResult sol = cfg.method == Method::Ista ? solve_ista(prob, cfg.solver)
                                                   : solve_fista(prob, cfg.solver);
      patches[i] = synthesize_patch(sol.code, *dict, cfg.c);
      reports[i] = std::move(sol.report);
    } catch (const std::exception& e) {
      reports[i].failed = true;
      reports[i].failure = "patch " + std::to_string(i) + ": " + e.what();
      patches[i] = Image(cfg.patch, cfg.patch, cfg.c);
    }
  });

  for (const SolverReport& r : reports)
    if (r.failed) throw std::runtime_error("reconstruct: " + r.failure);

  res.image = aggregate_patches(patches, grid);
  res.merged = merge_reports(reports);
  res.patch_reports = std::move(reports);
  return res;
}

}  // namespace jot
