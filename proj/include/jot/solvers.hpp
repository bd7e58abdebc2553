#pragma once

#include <string>
#include <vector>

#include "jot/dictionary.hpp"
#include "jot/frames.hpp"
#include "jot/image.hpp"
#include "jot/sensing.hpp"

namespace jot {

/// Coordinate-wise soft thresholding sign(v)*max(|v|-theta, 0).
void shrink_inplace(std::vector<double>& v, double theta);
void shrink_inplace(std::vector<double>& v, const std::vector<double>& theta);
std::vector<double> shrink(std::vector<double> v, double theta);
std::vector<double> shrink(std::vector<double> v, const std::vector<double>& theta);

/// One patch reconstruction problem: the bits of the patch's sensor region
/// plus the synthesis configuration. The smooth data term is
/// nll(H rho(D z) | bits); rho keeps every rate strictly positive, so the
/// whole code space is feasible.
struct PatchProblem {
  const Dictionary* dict = nullptr;
  const SensingOperator* op = nullptr;
  double c = 10.0;
  BitSummary bits;

  int code_length() const { return dict->atom_count; }
};

double data_term(const std::vector<double>& z, const PatchProblem& prob);
std::vector<double> data_grad(const std::vector<double>& z, const PatchProblem& prob);
double objective(const std::vector<double>& z, const PatchProblem& prob, double mu);

/// Power-iteration estimate of the spectral norm of the data-term Hessian at
/// the given code (defaults to z = 0). Used to pick fixed step sizes.
double lipschitz_estimate(const PatchProblem& prob, const std::vector<double>* z = nullptr,
                          int iterations = 30);

enum class SolverVariant { Ista, Fista, FistaStepReset };

struct SolverConfig {
  double mu = 4.0;
  double eta0 = 1.0;
  double beta = 0.5;        // backtracking shrink factor, in (0,1)
  int max_iters = 2000;
  double tolerance = 1e-8;  // relative objective change
  int tolerance_window = 5; // consecutive sub-tolerance changes required to stop
                            // (the accelerated objective is not monotone, so a
                            // single small change does not mean convergence)
  SolverVariant variant = SolverVariant::Fista;
  int reset_period = 5;     // for FistaStepReset
  double fixed_step = 0.0;  // > 0 switches off backtracking and uses this eta
  bool record_iterations = true;
};

struct IterationRecord {
  int iteration = 0;      // 1-based
  double objective = 0.0; // full objective at the new iterate
  double eta = 0.0;       // step size used
  int backtracks = 0;
  bool step_reset = false;
  double momentum_weight = 0.0;  // extrapolation weight applied after this step
  double seconds = 0.0;   // cumulative solver wall time
};

struct SolverReport {
  std::vector<IterationRecord> iterations;
  double initial_objective = 0.0;
  double final_objective = 0.0;
  int total_iterations = 0;
  bool converged = false;
  bool failed = false;
  std::string failure;
  double seconds = 0.0;
};

struct SolveResult {
  std::vector<double> code;
  SolverReport report;
};

/// Proximal gradient with backtracking (majorization test on the smooth term).
SolveResult solve_ista(const PatchProblem& prob, const SolverConfig& cfg,
                       std::vector<double> z0 = {});

/// Accelerated variant with the m_t momentum recursion; optionally resets the
/// step size to eta0 every reset_period iterations.
SolveResult solve_fista(const PatchProblem& prob, const SolverConfig& cfg,
                        std::vector<double> z0 = {});

struct MlConfig {
  double eta0 = 1.0;
  double beta = 0.5;
  int max_iters = 2000;
  double tolerance = 1e-8;
  int tolerance_window = 5;
  double floor_eps = 1e-8;  // nonnegativity floor for the projection
  bool record_iterations = true;
};

struct MlResult {
  Image x;
  SolverReport report;
};

/// Unregularized ML baseline: projected gradient with backtracking on
/// nll(H x | bits) over x >= floor_eps. Returns the low-resolution estimate.
MlResult solve_ml_unregularized(const BitSummary& bits, const SensingOperator& op,
                                const MlConfig& cfg, const Image& x0);

/// Sum per-patch reports into one objective-vs-iteration curve; shorter
/// reports are padded with their final objective.
SolverReport merge_reports(const std::vector<SolverReport>& reports);

}  // namespace jot
