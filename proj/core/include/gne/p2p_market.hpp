#pragma once

#include "gne/game.hpp"
#include "gne/online.hpp"

#include <utility>
#include <vector>

namespace gne {

/// Lipschitz-smoothed logarithmic barrier: -log(y) above the junction
/// y = 1/gamma, its tangent -gamma y + 1 + log(gamma) below. Value and slope
/// of the two branches match at the junction; the gradient is -1/y above it
/// and -gamma otherwise, so the function is defined (and C^1) on all of R.
double barrier(double y, double gamma);
double barrier_grad(double y, double gamma);

/// Cost coefficients and per-slot profiles of one prosumer.
struct ProsumerSpec {
  double c_mg = 0.1;      // main-grid price slope
  double c_dg = 0.3;      // dispatchable generation cost
  double c_tr = 0.05;     // linear trade price
  double kappa_tr = 0.1;  // quadratic trade cost
  double gamma = 1e3;     // barrier sharpness
  std::vector<double> dg_ref;  // scheduled generation setpoint per slot
  std::vector<double> demand;  // power demand p^d per slot
};

/// Undirected trading graph over the prosumers.
struct TradingGraph {
  int agents = 0;
  std::vector<std::pair<int, int>> pairs;    // i < j, lexicographic
  std::vector<std::vector<int>> partners;    // sorted partner list per agent

  static TradingGraph from_adjacency(const Eigen::MatrixXi& adjacency);
};

/// Index bookkeeping for the stacked prosumer decisions. Each agent block is
/// slot-major: [x_mg, x_dg, x_tr(partner 0), ..., x_tr(partner d-1), mu] per
/// slot, where mu is the locally managed multiplier of the power-balance row.
struct P2PLayout {
  int agents = 0;
  int horizon = 0;
  std::vector<int> degree;
  std::vector<int> offset;  // agent offsets in the stacked vector
  int total_dim = 0;

  int stride(int i) const { return degree[static_cast<size_t>(i)] + 3; }
  int agent_dim(int i) const { return horizon * stride(i); }
  int mg(int i, int t) const { return offset[static_cast<size_t>(i)] + t * stride(i); }
  int dg(int i, int t) const { return mg(i, t) + 1; }
  int tr(int i, int t, int p) const { return mg(i, t) + 2 + p; }
  int mu(int i, int t) const { return mg(i, t) + 2 + degree[static_cast<size_t>(i)]; }

  /// Smallest barrier-protected entry (over all x_mg, x_dg).
  double min_interior(const Vec& x) const;
};

P2PLayout p2p_layout(const TradingGraph& trading, int horizon);

/// One static game stacking all slots: quadratic generation and trading
/// costs, the aggregate main-grid price, the smoothed barrier on x_mg and
/// x_dg, one reciprocity coupling row per trading pair and slot, and the
/// power-balance rows kept inside each agent's block with locally managed
/// multipliers. The aggregation maps are scaled by N so the framework's
/// (1/N)-average reproduces the plain main-grid sum.
Game build_dayahead_game(const std::vector<ProsumerSpec>& specs, const TradingGraph& trading,
                         int horizon = 96);

/// Per-slot sequence of single-slot games sharing the reciprocity coupling;
/// time variation enters through demand(t) and dg_ref(t).
GameSequence build_realtime_sequence(const std::vector<ProsumerSpec>& specs,
                                     const TradingGraph& trading, int horizon = 96);

/// Seeded synthetic demand / setpoint profiles (sinusoid plus noise),
/// strictly positive.
std::vector<ProsumerSpec> synthetic_prosumers(int agents, int horizon, std::uint64_t profile_seed,
                                              double c_mg = 0.1, double c_dg = 0.3,
                                              double c_tr = 0.05, double kappa_tr = 0.1,
                                              double gamma = 1e3);

/// A feasible interior starting point: x_mg = x_dg = max(demand, 1)/2,
/// trades and multipliers zero.
std::vector<Vec> interior_start(const std::vector<ProsumerSpec>& specs,
                                const TradingGraph& trading, int horizon);

}  // namespace gne
