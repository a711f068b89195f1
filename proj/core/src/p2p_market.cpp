#include "gne/p2p_market.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace gne {

double barrier(double y, double gamma) {
  if (!(gamma > 0)) throw std::invalid_argument("barrier: gamma must be positive");
  if (y > 1.0 / gamma) return -std::log(y);
  return -gamma * y + 1.0 + std::log(gamma);
}

double barrier_grad(double y, double gamma) {
  if (!(gamma > 0)) throw std::invalid_argument("barrier_grad: gamma must be positive");
  return y > 1.0 / gamma ? -1.0 / y : -gamma;
}

TradingGraph TradingGraph::from_adjacency(const Eigen::MatrixXi& adjacency) {
  if (adjacency.rows() != adjacency.cols() || adjacency.rows() < 1) {
    throw std::invalid_argument("trading graph: adjacency must be square");
  }
  TradingGraph t;
  t.agents = static_cast<int>(adjacency.rows());
  t.partners.resize(static_cast<size_t>(t.agents));
  for (int i = 0; i < t.agents; ++i) {
    if (adjacency(i, i) != 0) throw std::invalid_argument("trading graph: no self-trades");
    for (int j = i + 1; j < t.agents; ++j) {
      if (adjacency(i, j) != adjacency(j, i)) {
        throw std::invalid_argument("trading graph: adjacency must be symmetric");
      }
      if (adjacency(i, j) != 0) {
        t.pairs.emplace_back(i, j);
        t.partners[static_cast<size_t>(i)].push_back(j);
        t.partners[static_cast<size_t>(j)].push_back(i);
      }
    }
  }
  return t;
}

P2PLayout p2p_layout(const TradingGraph& trading, int horizon) {
  if (horizon < 1) throw std::invalid_argument("p2p layout: horizon must be positive");
  P2PLayout l;
  l.agents = trading.agents;
  l.horizon = horizon;
  l.degree.resize(static_cast<size_t>(l.agents));
  l.offset.resize(static_cast<size_t>(l.agents));
  for (int i = 0; i < l.agents; ++i) {
    l.degree[static_cast<size_t>(i)] = static_cast<int>(trading.partners[static_cast<size_t>(i)].size());
    l.offset[static_cast<size_t>(i)] = l.total_dim;
    l.total_dim += l.agent_dim(i);
  }
  return l;
}

double P2PLayout::min_interior(const Vec& x) const {
  if (x.size() != total_dim) throw std::invalid_argument("min_interior: dimension mismatch");
  double lo = std::numeric_limits<double>::infinity();
  for (int i = 0; i < agents; ++i) {
    for (int t = 0; t < horizon; ++t) {
      lo = std::min(lo, std::min(x[mg(i, t)], x[dg(i, t)]));
    }
  }
  return lo;
}

namespace {

void check_specs(const std::vector<ProsumerSpec>& specs, const TradingGraph& trading,
                 int horizon) {
  if (static_cast<int>(specs.size()) != trading.agents || specs.empty()) {
    throw std::invalid_argument("p2p: one prosumer spec per trading-graph node required");
  }
  for (const ProsumerSpec& s : specs) {
    if (!(s.kappa_tr > 0)) throw std::invalid_argument("p2p: kappa_tr must be positive");
    if (!(s.gamma > 0)) throw std::invalid_argument("p2p: gamma must be positive");
    if (!(s.c_mg > 0) || !(s.c_dg > 0)) throw std::invalid_argument("p2p: prices must be positive");
    if (static_cast<int>(s.dg_ref.size()) < horizon ||
        static_cast<int>(s.demand.size()) < horizon) {
      throw std::invalid_argument("p2p: profiles shorter than the horizon");
    }
  }
}

// Agent block for a window of slots [slot0, slot0 + horizon). The per-slot
// layout matches P2PLayout with the agent offset removed.
Game::Agent make_prosumer_agent(const ProsumerSpec& spec, int agent, int agents_total,
                                const TradingGraph& trading, int slot0, int horizon,
                                int rows_total, int rows_per_slot) {
  const auto& partners = trading.partners[static_cast<size_t>(agent)];
  const int d = static_cast<int>(partners.size());
  const int stride = d + 3;
  const int n_i = horizon * stride;
  const int N = agents_total;

  Game::Agent a;
  a.dim = n_i;

  a.grad_local = [spec, d, stride, slot0, horizon, n_i](const Vec& x, const Vec& sigma) {
    Vec g(n_i);
    for (int t = 0; t < horizon; ++t) {
      const int base = t * stride;
      const double mg = x[base];
      const double dg = x[base + 1];
      const double mu = x[base + 2 + d];
      double traded = 0;
      for (int p = 0; p < d; ++p) {
        const double tr = x[base + 2 + p];
        g[base + 2 + p] = spec.c_tr + 2.0 * spec.kappa_tr * tr + mu;
        traded += tr;
      }
      g[base] = spec.c_mg * sigma[t] + barrier_grad(mg, spec.gamma) + mu;
      g[base + 1] = 2.0 * spec.c_dg * (dg - spec.dg_ref[static_cast<size_t>(slot0 + t)]) +
                    barrier_grad(dg, spec.gamma) + mu;
      g[base + 2 + d] = -(traded + mg + dg - spec.demand[static_cast<size_t>(slot0 + t)]);
    }
    return g;
  };

  a.grad_agg = [spec, stride, horizon](const Vec& x, const Vec&) {
    Vec g(horizon);
    for (int t = 0; t < horizon; ++t) g[t] = spec.c_mg * x[t * stride];
    return g;
  };

  a.phi = [stride, horizon, N](const Vec& x) {
    Vec v(horizon);
    for (int t = 0; t < horizon; ++t) v[t] = N * x[t * stride];
    return v;
  };

  SpMat jac(horizon, n_i);
  {
    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(static_cast<size_t>(horizon));
    for (int t = 0; t < horizon; ++t) trip.emplace_back(t, t * stride, static_cast<double>(N));
    jac.setFromTriplets(trip.begin(), trip.end());
  }
  a.dphi = [jac](const Vec&) { return jac; };

  // Reciprocity rows: +1 at this agent's trade toward the pair partner.
  std::vector<Eigen::Triplet<double>> trip;
  for (size_t p = 0; p < trading.pairs.size(); ++p) {
    const auto& [u, v] = trading.pairs[p];
    int partner = -1;
    if (u == agent) partner = v;
    if (v == agent) partner = u;
    if (partner < 0) continue;
    const int pos = static_cast<int>(std::lower_bound(partners.begin(), partners.end(), partner) -
                                     partners.begin());
    for (int t = 0; t < horizon; ++t) {
      trip.emplace_back(static_cast<int>(p) * rows_per_slot + t, t * stride + 2 + pos, 1.0);
    }
  }
  a.A.resize(rows_total, n_i);
  a.A.setFromTriplets(trip.begin(), trip.end());
  a.b = Vec::Zero(rows_total);
  return a;
}

}  // namespace

Game build_dayahead_game(const std::vector<ProsumerSpec>& specs, const TradingGraph& trading,
                         int horizon) {
  check_specs(specs, trading, horizon);
  const int m = static_cast<int>(trading.pairs.size()) * horizon;
  std::vector<Game::Agent> agents;
  agents.reserve(specs.size());
  for (int i = 0; i < trading.agents; ++i) {
    agents.push_back(make_prosumer_agent(specs[static_cast<size_t>(i)], i, trading.agents,
                                         trading, 0, horizon, m, horizon));
  }
  return Game(horizon, m, std::move(agents));
}

GameSequence build_realtime_sequence(const std::vector<ProsumerSpec>& specs,
                                     const TradingGraph& trading, int horizon) {
  check_specs(specs, trading, horizon);
  const int m = static_cast<int>(trading.pairs.size());
  auto gen = [specs, trading, m](int t) {
    std::vector<Game::Agent> agents;
    agents.reserve(specs.size());
    for (int i = 0; i < trading.agents; ++i) {
      agents.push_back(make_prosumer_agent(specs[static_cast<size_t>(i)], i, trading.agents,
                                           trading, t, 1, m, 1));
    }
    return Game(1, m, std::move(agents));
  };
  return GameSequence(std::move(gen), horizon);
}

std::vector<ProsumerSpec> synthetic_prosumers(int agents, int horizon, std::uint64_t profile_seed,
                                              double c_mg, double c_dg, double c_tr,
                                              double kappa_tr, double gamma) {
  if (agents < 1 || horizon < 1) throw std::invalid_argument("synthetic_prosumers: bad sizes");
  std::mt19937_64 rng(profile_seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<ProsumerSpec> specs;
  specs.reserve(static_cast<size_t>(agents));
  const double two_pi = 2.0 * M_PI;
  for (int i = 0; i < agents; ++i) {
    ProsumerSpec s;
    s.c_mg = c_mg;
    s.c_dg = c_dg;
    s.c_tr = c_tr;
    s.kappa_tr = kappa_tr;
    s.gamma = gamma;
    const double base = 1.2 + 0.8 * unif(rng);
    const double amp = 0.2 + 0.3 * unif(rng);
    const double phase = two_pi * unif(rng);
    const double ref_base = 0.4 + 0.4 * unif(rng);
    const double ref_amp = 0.1 + 0.2 * unif(rng);
    const double ref_phase = two_pi * unif(rng);
    s.demand.resize(static_cast<size_t>(horizon));
    s.dg_ref.resize(static_cast<size_t>(horizon));
    for (int t = 0; t < horizon; ++t) {
      const double u = two_pi * t / horizon;
      s.demand[static_cast<size_t>(t)] = base + amp * std::sin(u + phase) + 0.02 * gauss(rng);
      s.dg_ref[static_cast<size_t>(t)] =
          ref_base + ref_amp * std::sin(u + ref_phase) + 0.01 * gauss(rng);
    }
    specs.push_back(std::move(s));
  }
  return specs;
}

std::vector<Vec> interior_start(const std::vector<ProsumerSpec>& specs,
                                const TradingGraph& trading, int horizon) {
  check_specs(specs, trading, horizon);
  const P2PLayout l = p2p_layout(trading, horizon);
  std::vector<Vec> x0;
  x0.reserve(specs.size());
  for (int i = 0; i < l.agents; ++i) {
    Vec x = Vec::Zero(l.agent_dim(i));
    for (int t = 0; t < horizon; ++t) {
      const double level = std::max(specs[static_cast<size_t>(i)].demand[static_cast<size_t>(t)],
                                    1.0) / 2.0;
      x[t * l.stride(i)] = level;
      x[t * l.stride(i) + 1] = level;
    }
    x0.push_back(std::move(x));
  }
  return x0;
}

}  // namespace gne
