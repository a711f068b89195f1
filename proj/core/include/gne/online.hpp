#pragma once

#include "gne/game.hpp"
#include "gne/metric.hpp"
#include "gne/solver_distributed.hpp"
#include "gne/solver_full.hpp"

#include <functional>
#include <map>

namespace gne {

/// Indexed family of games sharing the coupling matrix A; only the gradient
/// oracles, the aggregation maps and the affine offsets b may vary with t.
/// Instances are generated lazily, cached, and checked against the t = 0
/// coupling fingerprint.
class GameSequence {
 public:
  GameSequence(std::function<Game(int)> generator, int length);

  const Game& at(int t) const;
  int length() const { return length_; }

 private:
  std::function<Game(int)> gen_;
  int length_ = 0;
  mutable std::map<int, Game> cache_;
};

/// K warm-started forward steps on the time-t KKT operator:
/// y^0 = prev, y^{k+1} = y^k - alpha A_t(y^k), returns y^K. Requires K >= 1.
PrimalDual online_full_step(const GameSequence& seq, int t, const PrimalDual& prev,
                            double alpha, int K);

/// rho^{K/2} / (1 - rho^{K/2}) * delta * sqrt(lambda_max(P)).
double tracking_bound_full(const Metric& met, double rho, int K, double delta);

/// Cold start of the time-varying tracker: sigma_i = 0, lambda_i = z_i,
/// r_i = A_i x_i (the time-0 offsets count as zero).
NetworkState online_cold_start(const Game& g, const std::vector<Vec>& x0,
                               const std::vector<Vec>& z0);

/// One outer step of the re-initialized distributed tracker: adjust the
/// sigma estimates for the new aggregation maps and the r estimates for the
/// new offsets, then run K tracking rounds with the time-t oracles. At t = 0
/// the previous game is the zero game (phi = 0, b = 0) and the step reduces
/// to a plain distributed run from the cold start.
NetworkState online_distributed_step(const GameSequence& seq, int t, const CommGraph& graph,
                                     const NetworkState& prev, double alpha, int K);

/// The re-initialization perturbation applied at time t: the stacked sigma
/// and r estimate adjustments col(phi_i^t(x_i) - phi_i^{t-1}(x_i)),
/// col(b_i^{t-1} - b_i^t).
Vec reinit_perturbation(const GameSequence& seq, int t, const NetworkState& prev);

/// eta^{K/2} / (1 - eta^{K/2}) * sqrt(lambda_max(Q)) *
/// ((1 + N ell_A) delta + delta_phi), with Q = diag(P/2, I).
double tracking_bound_distributed(const Metric& met, double eta, int K, double delta,
                                  double delta_phi, int agents, double ell_A);

struct DriftEstimate {
  double delta = 0;
  double delta_phi = 0;
  std::vector<PrimalDual> solutions;  // omega*_t over the measured horizon
};

struct DriftOptions {
  double tol = 1e-10;
  double alpha = 0;  // <= 0 picks the metric's optimal step
  int max_iter = 400000;
  int probe_points = 16;
  double probe_radius = 10.0;
  std::uint64_t probe_seed = 0;
};

/// delta = max_t ||omega*_{t+1} - omega*_t|| with per-t solutions from the
/// full-information solver (warm-started across t), and delta_phi the max
/// over t and seeded probe points of ||col(phi_i^t - phi_i^{t+1})||.
/// Throws (naming t) when a per-t solve does not converge.
DriftEstimate measure_drift(const GameSequence& seq, const Metric& met, int horizon,
                            const DriftOptions& opt = {});

}  // namespace gne
