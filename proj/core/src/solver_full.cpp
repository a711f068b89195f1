#include "gne/solver_full.hpp"

#include <cmath>
#include <sstream>

namespace gne {

void SolveOptions::require_certified(const Metric& met) const {
  const double a = alpha > 0 ? alpha : met.optimal_alpha();
  const double limit = met.alpha_limit();
  if (!(a > 0) || !(a < limit)) {
    std::ostringstream msg;
    msg << "step size " << a << " outside the certified interval (0, " << limit << ")";
    throw std::invalid_argument(msg.str());
  }
}

PrimalDual pd_step(const Game& g, const PrimalDual& w, double alpha) {
  if (!(alpha > 0)) throw std::invalid_argument("pd_step: alpha must be positive");
  const Vec a = kkt_apply(g, w);
  PrimalDual next{w.x - alpha * a.head(g.dim()), w.lambda - alpha * a.tail(g.rows())};
  if (!next.x.allFinite() || !next.lambda.allFinite()) {
    throw std::runtime_error("pd_step: divergence detected");
  }
  return next;
}

SolveResult solve(const Game& g, const Metric& met, const SolveOptions& opt,
                  const PrimalDual& start, const PrimalDual* reference) {
  const double alpha = opt.alpha > 0 ? opt.alpha : met.optimal_alpha();
  if (opt.max_iter < 0) throw std::invalid_argument("solve: max_iter must be nonnegative");

  SolveResult res;
  res.point = start;
  for (int k = 0;; ++k) {
    const Vec a = kkt_apply(g, res.point);
    res.residual_norm = a.norm();
    if (opt.record_trace) {
      res.trace.residual.push_back(res.residual_norm);
      if (reference != nullptr) {
        res.trace.lyapunov.push_back(met.squared_norm_P(res.point - *reference));
      }
    }
    res.iterations = k;
    if (res.residual_norm <= opt.tol) {
      res.converged = true;
      break;
    }
    if (k >= opt.max_iter) break;
    res.point.x -= alpha * a.head(g.dim());
    res.point.lambda -= alpha * a.tail(g.rows());
    if (!res.point.x.allFinite() || !res.point.lambda.allFinite()) {
      throw std::runtime_error("solve: divergence detected at iteration " + std::to_string(k));
    }
  }
  return res;
}

Vec stack_blocks(const std::vector<Vec>& blocks) {
  Eigen::Index total = 0;
  for (const Vec& v : blocks) total += v.size();
  Vec out(total);
  Eigen::Index at = 0;
  for (const Vec& v : blocks) {
    out.segment(at, v.size()) = v;
    at += v.size();
  }
  return out;
}

SemiState semidecentralized_init(const Game& g, const Vec& x0, const Vec& lambda0) {
  if (x0.size() != g.dim() || lambda0.size() != g.rows()) {
    throw std::invalid_argument("semidecentralized_init: dimension mismatch");
  }
  SemiState s;
  s.x.reserve(static_cast<size_t>(g.agents()));
  for (int i = 0; i < g.agents(); ++i) s.x.push_back(g.block(x0, i));
  s.sigma = g.aggregate(x0);
  s.lambda = lambda0;
  return s;
}

SemiState semidecentralized_round(const Game& g, const SemiState& s, double alpha) {
  if (!(alpha > 0)) throw std::invalid_argument("semidecentralized_round: alpha must be positive");
  const int N = g.agents();
  SemiState next;
  next.x.resize(static_cast<size_t>(N));

  // Agent phase: each update reads only (x_i, sigma^k, lambda^k, A_i).
  for (int i = 0; i < N; ++i) {
    next.x[static_cast<size_t>(i)] =
        s.x[static_cast<size_t>(i)] -
        alpha * (g.extended_block(i, s.x[static_cast<size_t>(i)], s.sigma) +
                 g.coupling_block(i).transpose() * s.lambda);
  }

  // Coordinator phase: lambda from the pre-update residual blocks, sigma from
  // the post-update aggregation values; both reductions in agent order.
  Vec acc = Vec::Zero(g.rows());
  for (int i = 0; i < N; ++i) {
    acc += g.coupling_block(i) * s.x[static_cast<size_t>(i)] - g.offset_block(i);
  }
  next.lambda = s.lambda + alpha * acc;
  Vec agg = Vec::Zero(g.aggregate_dim());
  for (int i = 0; i < N; ++i) {
    agg += g.local_aggregate(i, next.x[static_cast<size_t>(i)]);
  }
  next.sigma = agg / N;
  return next;
}

}  // namespace gne
