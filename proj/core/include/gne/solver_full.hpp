#pragma once

#include "gne/game.hpp"
#include "gne/metric.hpp"
#include "gne/trace.hpp"

namespace gne {

struct SolveOptions {
  double alpha = 0;     // <= 0 picks the metric's optimal step
  double tol = 1e-8;    // stopping tolerance on the KKT residual norm
  int max_iter = 100000;
  bool record_trace = false;

  /// Throws unless alpha lies in the certified window (0, 2 mu_op/ell_op^2).
  void require_certified(const Metric& met) const;
};

struct SolveResult {
  PrimalDual point;
  bool converged = false;
  int iterations = 0;
  double residual_norm = 0;
  FullTrace trace;
};

/// One forward step omega - alpha * A(omega); both blocks are evaluated at
/// the pre-update point. Throws std::runtime_error on non-finite values.
PrimalDual pd_step(const Game& g, const PrimalDual& w, double alpha);

/// Iterates pd_step until ||A(omega)|| <= tol or max_iter. The trace records
/// the residual norm per iterate and, when a reference point is supplied,
/// the squared P-distance to it.
SolveResult solve(const Game& g, const Metric& met, const SolveOptions& opt,
                  const PrimalDual& start, const PrimalDual* reference = nullptr);

/// Message state of the semi-decentralized loop: agents hold their own x_i,
/// the coordinator holds (sigma, lambda).
struct SemiState {
  std::vector<Vec> x;
  Vec sigma;
  Vec lambda;
};

SemiState semidecentralized_init(const Game& g, const Vec& x0, const Vec& lambda0);

/// One round of the two-phase message pattern: each agent updates x_i from
/// (x_i, sigma^k, lambda^k, A_i) only; the coordinator then updates lambda
/// from the pre-update residual blocks and sigma from the post-update
/// aggregation values. Produces the same trajectory as pd_step.
SemiState semidecentralized_round(const Game& g, const SemiState& s, double alpha);

Vec stack_blocks(const std::vector<Vec>& blocks);

}  // namespace gne
