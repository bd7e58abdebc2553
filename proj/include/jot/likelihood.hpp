#pragma once

#include "jot/frames.hpp"
#include "jot/image.hpp"

namespace jot {

/// log P(Poisson(lambda) < q) and log P(Poisson(lambda) >= q), both accurate
/// even when the corresponding probability is within double epsilon of 1.
/// The side that is small in the current regime is accumulated directly in
/// log space (lower-tail series for lambda < q+1, upper-tail continued
/// fraction otherwise) and the other follows via log(1 - e^x).
struct LogTailPair {
  double log_below;  // log P(e < q)  = log p
  double log_reach;  // log P(e >= q) = log(1-p)
};
LogTailPair poisson_log_tails(double q, double lambda);

/// p = P(Poisson(lambda) < q), q >= 1 integer-valued.
double poisson_cdf_below(std::int64_t q, double lambda);

/// log of the Poisson pmf at q-1, which equals -dp/dlambda.
double log_poisson_pmf_at(double q_minus_1, double lambda);

/// Negative log-likelihood of the sensor rates given the bits (constant term
/// dropped): sum_j [ -n0 log p_j - n1 log(1-p_j) ]. Returns +infinity when a
/// one was observed at a pixel with rate exactly 0.
double nll(const Image& rate, const BitSummary& bits);
double nll(const Image& rate, const BinaryFrameStack& stack);

/// Per-pixel first derivative d nll / d lambda_j. Requires lambda_j > 0
/// wherever ones were observed.
Image nll_grad(const Image& rate, const BitSummary& bits);

/// Per-pixel second derivative (the likelihood is separable, so the full
/// Hessian is diagonal and never materialized).
Image nll_hess_diag(const Image& rate, const BitSummary& bits);

}  // namespace jot
