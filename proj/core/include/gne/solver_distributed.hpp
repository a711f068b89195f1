#pragma once

#include "gne/game.hpp"
#include "gne/graph.hpp"
#include "gne/metric.hpp"
#include "gne/trace.hpp"

#include <cstdint>
#include <vector>

namespace gne {

/// Per-agent state in the partial-decision regime: the decision x_i plus the
/// consensus-tracked estimates of the aggregate, the dual variable and the
/// constraint residual, and the auxiliary dual z_i.
struct AgentState {
  Vec x;
  Vec sigma;
  Vec lambda;
  Vec r;
  Vec z;
};

/// Stacked network state. Means use compensated summation so the tracking
/// invariances stay at float-drift level over long runs.
struct NetworkState {
  std::vector<AgentState> agents;

  Vec stacked_x(const Game& g) const;
  Vec mean_sigma() const;
  Vec mean_lambda() const;
  Vec mean_r() const;
};

/// x_i from x0, sigma_i = phi_i(x0_i), lambda_i = z_i = z0_i,
/// r_i = A_i x0_i - b_i.
NetworkState distributed_init(const Game& g, const std::vector<Vec>& x0,
                              const std::vector<Vec>& z0);

/// One synchronous round of the tracking dynamics: local updates
///   x_i <- x_i - alpha (F_i(x_i, sigma_i) + A_i^T lambda_i),
///   z_i <- z_i + alpha N r_i,
/// then the consensus-tracking updates, with every neighbor read taken from
/// the pre-round state (double buffered). Throws std::runtime_error naming
/// the agent on non-finite values.
NetworkState distributed_round(const Game& g, const CommGraph& graph, const NetworkState& s,
                               double alpha);

/// Deviations of the three tracking invariances:
/// mean lambda vs mean z, mean r vs mean (A_i x_i - b_i), mean sigma vs
/// sigma(x).
struct InvarianceReport {
  double sigma_gap = 0;
  double lambda_gap = 0;
  double r_gap = 0;
  double max_gap() const;
};
InvarianceReport invariance_check(const Game& g, const NetworkState& s);

/// Coordinates (xi, chi): xi = col(x, mean lambda), chi the stacked
/// zero-mean deviations of (sigma, r, lambda).
struct CompactState {
  PrimalDual xi;
  Vec sigma_dev;   // N q
  Vec r_dev;       // N m
  Vec lambda_dev;  // N m

  double chi_squared_norm() const {
    return sigma_dev.squaredNorm() + r_dev.squaredNorm() + lambda_dev.squaredNorm();
  }
};

CompactState compact_from_network(const Game& g, const NetworkState& s);

/// The two-block reformulation of the tracking round in (xi, chi)
/// coordinates; produces the image of distributed_round under
/// compact_from_network. Throws std::invalid_argument when the chi blocks do
/// not have zero agent-means.
CompactState compact_step(const Game& g, const CommGraph& graph, const CompactState& s,
                          double alpha);

/// V = 1/2 ||xi - xi_star||_P^2 + ||chi||^2.
double lyapunov(const Metric& met, const CompactState& s, const PrimalDual& xi_star);
double lyapunov(const Metric& met, const Game& g, const NetworkState& s,
                const PrimalDual& xi_star);

/// Geometric backtracking from alpha_start (default: the metric's optimal
/// full-information step): halve until V is non-increasing over the probe
/// horizon from a seeded random start. Deterministic for a fixed seed.
/// Throws std::runtime_error when no stable step above 1e-12 exists.
double tune_alpha(const Game& g, const Metric& met, const GraphSchedule& schedule,
                  int probe_horizon, std::uint64_t seed, const PrimalDual& xi_star,
                  double alpha_start = 0);
double tune_alpha(const Game& g, const Metric& met, const CommGraph& graph, int probe_horizon,
                  std::uint64_t seed, const PrimalDual& xi_star, double alpha_start = 0);

/// Seeded standard-normal starting point (x0, z0) for probes and experiments.
std::pair<std::vector<Vec>, std::vector<Vec>> random_network_start(const Game& g,
                                                                   std::uint64_t seed);

}  // namespace gne
