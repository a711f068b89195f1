#include "gne/solver_distributed.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace gne {

namespace {

// Compensated (Kahan) mean of one per-agent field.
template <typename Select>
Vec kahan_mean(const std::vector<AgentState>& agents, Eigen::Index dim, Select select) {
  Vec sum = Vec::Zero(dim);
  Vec comp = Vec::Zero(dim);
  for (const AgentState& a : agents) {
    const Vec y = select(a) - comp;
    const Vec t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum / static_cast<double>(agents.size());
}

// Kahan mean over the agent blocks of a stacked vector.
Vec kahan_block_mean(const Vec& stacked, int agents, Eigen::Index dim) {
  Vec sum = Vec::Zero(dim);
  Vec comp = Vec::Zero(dim);
  for (int i = 0; i < agents; ++i) {
    const Vec y = stacked.segment(i * dim, dim) - comp;
    const Vec t = sum + y;
    comp = (t - sum) - y;
    sum = t;
  }
  return sum / static_cast<double>(agents);
}

// Projector onto zero-mean deviations applied blockwise (I - (1/N) 11^T (x) I).
Vec project_deviation(const Vec& stacked, int agents, Eigen::Index dim) {
  const Vec mean = kahan_block_mean(stacked, agents, dim);
  Vec out(stacked.size());
  for (int i = 0; i < agents; ++i) {
    out.segment(i * dim, dim) = stacked.segment(i * dim, dim) - mean;
  }
  return out;
}

// out_i = sum_j w_ij in_j over j with w_ij != 0, ascending j (self included).
Vec mix_blocks(const CommGraph& graph, const Vec& stacked, Eigen::Index dim) {
  const int N = graph.size();
  Vec out = Vec::Zero(stacked.size());
  for (int i = 0; i < N; ++i) {
    Vec acc = Vec::Zero(dim);
    for (int j = 0; j < N; ++j) {
      const double w = graph.weight(i, j);
      if (w != 0.0) acc += w * stacked.segment(j * dim, dim);
    }
    out.segment(i * dim, dim) = acc;
  }
  return out;
}

void check_sizes(const Game& g, const NetworkState& s) {
  if (static_cast<int>(s.agents.size()) != g.agents()) {
    throw std::invalid_argument("network state has wrong agent count");
  }
  for (int i = 0; i < g.agents(); ++i) {
    const AgentState& a = s.agents[static_cast<size_t>(i)];
    if (a.x.size() != g.dim_of(i) || a.sigma.size() != g.aggregate_dim() ||
        a.lambda.size() != g.rows() || a.r.size() != g.rows() || a.z.size() != g.rows()) {
      throw std::invalid_argument("network state dimensions do not match the game");
    }
  }
}

}  // namespace

Vec NetworkState::stacked_x(const Game& g) const {
  Vec x(g.dim());
  for (int i = 0; i < g.agents(); ++i) {
    x.segment(g.offset_of(i), g.dim_of(i)) = agents[static_cast<size_t>(i)].x;
  }
  return x;
}

Vec NetworkState::mean_sigma() const {
  return kahan_mean(agents, agents.front().sigma.size(), [](const AgentState& a) { return a.sigma; });
}

Vec NetworkState::mean_lambda() const {
  return kahan_mean(agents, agents.front().lambda.size(), [](const AgentState& a) { return a.lambda; });
}

Vec NetworkState::mean_r() const {
  return kahan_mean(agents, agents.front().r.size(), [](const AgentState& a) { return a.r; });
}

NetworkState distributed_init(const Game& g, const std::vector<Vec>& x0,
                              const std::vector<Vec>& z0) {
  if (static_cast<int>(x0.size()) != g.agents() || static_cast<int>(z0.size()) != g.agents()) {
    throw std::invalid_argument("distributed_init: need one x0 and z0 block per agent");
  }
  NetworkState s;
  s.agents.resize(static_cast<size_t>(g.agents()));
  for (int i = 0; i < g.agents(); ++i) {
    AgentState& a = s.agents[static_cast<size_t>(i)];
    a.x = x0[static_cast<size_t>(i)];
    a.z = z0[static_cast<size_t>(i)];
    if (a.x.size() != g.dim_of(i) || a.z.size() != g.rows()) {
      throw std::invalid_argument("distributed_init: block dimension mismatch");
    }
    a.sigma = g.local_aggregate(i, a.x);
    a.lambda = a.z;
    a.r = g.coupling_block(i) * a.x - g.offset_block(i);
  }
  return s;
}

NetworkState distributed_round(const Game& g, const CommGraph& graph, const NetworkState& s,
                               double alpha) {
  check_sizes(g, s);
  if (graph.size() != g.agents()) {
    throw std::invalid_argument("distributed_round: graph size does not match agent count");
  }
  const int N = g.agents();
  NetworkState next;
  next.agents.resize(static_cast<size_t>(N));

  // Local updates from the pre-round snapshot.
  for (int i = 0; i < N; ++i) {
    const AgentState& a = s.agents[static_cast<size_t>(i)];
    AgentState& n = next.agents[static_cast<size_t>(i)];
    n.x = a.x - alpha * (g.extended_block(i, a.x, a.sigma) +
                         g.coupling_block(i).transpose() * a.lambda);
    n.z = a.z + alpha * N * a.r;
    if (!n.x.allFinite() || !n.z.allFinite()) {
      throw std::runtime_error("distributed_round: divergence at agent " + std::to_string(i));
    }
  }

  // Tracking updates; neighbor reads use pre-round values.
  for (int i = 0; i < N; ++i) {
    const AgentState& a = s.agents[static_cast<size_t>(i)];
    AgentState& n = next.agents[static_cast<size_t>(i)];
    Vec sig = Vec::Zero(g.aggregate_dim());
    Vec res = Vec::Zero(g.rows());
    Vec lam = Vec::Zero(g.rows());
    for (int j = 0; j < N; ++j) {
      const double w = graph.weight(i, j);
      if (w == 0.0) continue;
      const AgentState& b = s.agents[static_cast<size_t>(j)];
      sig += w * b.sigma;
      res += w * b.r;
      lam += w * b.lambda;
    }
    n.sigma = sig + g.local_aggregate(i, n.x) - g.local_aggregate(i, a.x);
    n.r = res + g.coupling_block(i) * n.x - g.coupling_block(i) * a.x;
    n.lambda = lam + n.z - a.z;
  }
  return next;
}

double InvarianceReport::max_gap() const {
  return std::max(sigma_gap, std::max(lambda_gap, r_gap));
}

InvarianceReport invariance_check(const Game& g, const NetworkState& s) {
  check_sizes(g, s);
  InvarianceReport rep;
  rep.lambda_gap = (s.mean_lambda() - kahan_mean(s.agents, g.rows(), [](const AgentState& a) {
                      return a.z;
                    })).norm();

  Vec sum = Vec::Zero(g.rows());
  Vec comp = Vec::Zero(g.rows());
  for (int i = 0; i < g.agents(); ++i) {
    const AgentState& a = s.agents[static_cast<size_t>(i)];
    const Vec term = Vec(g.coupling_block(i) * a.x - g.offset_block(i)) - comp;
    const Vec t = sum + term;
    comp = (t - sum) - term;
    sum = t;
  }
  rep.r_gap = (s.mean_r() - sum / g.agents()).norm();
  rep.sigma_gap = (s.mean_sigma() - g.aggregate(s.stacked_x(g))).norm();
  return rep;
}

CompactState compact_from_network(const Game& g, const NetworkState& s) {
  check_sizes(g, s);
  const int N = g.agents();
  const Eigen::Index q = g.aggregate_dim();
  const Eigen::Index m = g.rows();
  CompactState c;
  c.xi.x = s.stacked_x(g);
  c.xi.lambda = s.mean_lambda();
  const Vec sigma_bar = s.mean_sigma();
  const Vec r_bar = s.mean_r();
  c.sigma_dev.resize(N * q);
  c.r_dev.resize(N * m);
  c.lambda_dev.resize(N * m);
  for (int i = 0; i < N; ++i) {
    const AgentState& a = s.agents[static_cast<size_t>(i)];
    c.sigma_dev.segment(i * q, q) = a.sigma - sigma_bar;
    c.r_dev.segment(i * m, m) = a.r - r_bar;
    c.lambda_dev.segment(i * m, m) = a.lambda - c.xi.lambda;
  }
  return c;
}

CompactState compact_step(const Game& g, const CommGraph& graph, const CompactState& s,
                          double alpha) {
  const int N = g.agents();
  const Eigen::Index q = g.aggregate_dim();
  const Eigen::Index m = g.rows();
  if (s.xi.x.size() != g.dim() || s.xi.lambda.size() != m || s.sigma_dev.size() != N * q ||
      s.r_dev.size() != N * m || s.lambda_dev.size() != N * m) {
    throw std::invalid_argument("compact_step: dimension mismatch");
  }
  const double scale = 1.0 + std::sqrt(s.chi_squared_norm());
  if (q > 0 && kahan_block_mean(s.sigma_dev, N, q).norm() > 1e-8 * scale) {
    throw std::invalid_argument("compact_step: sigma deviations must have zero mean");
  }
  if (m > 0 && (kahan_block_mean(s.r_dev, N, m).norm() > 1e-8 * scale ||
                kahan_block_mean(s.lambda_dev, N, m).norm() > 1e-8 * scale)) {
    throw std::invalid_argument("compact_step: r/lambda deviations must have zero mean");
  }

  CompactState next;

  // xi update: B1(xi) = xi - alpha A(xi) plus the consensus-error forcing
  // term; by the invariances the agent estimates are sigma_dev + sigma(x)
  // and lambda_bar + lambda_dev.
  const Vec sigma_true = g.aggregate(s.xi.x);
  next.xi.x.resize(g.dim());
  for (int i = 0; i < N; ++i) {
    const Vec x_i = g.block(s.xi.x, i);
    const Vec sigma_i = s.sigma_dev.segment(i * q, q) + sigma_true;
    const Vec lambda_i = s.xi.lambda + s.lambda_dev.segment(i * m, m);
    next.xi.x.segment(g.offset_of(i), g.dim_of(i)) =
        x_i - alpha * (g.extended_block(i, x_i, sigma_i) +
                       g.coupling_block(i).transpose() * lambda_i);
  }
  next.xi.lambda = s.xi.lambda + alpha * g.residual(s.xi.x);

  // chi update: W-mixing of the deviations plus projected tracking increments
  // and the alpha N r-deviation forcing of the lambda block.
  Vec sigma_inc(N * q);
  Vec r_inc(N * m);
  for (int i = 0; i < N; ++i) {
    const Vec x_old = g.block(s.xi.x, i);
    const Vec x_new = g.block(next.xi.x, i);
    sigma_inc.segment(i * q, q) = g.local_aggregate(i, x_new) - g.local_aggregate(i, x_old);
    r_inc.segment(i * m, m) = g.coupling_block(i) * (x_new - x_old);
  }
  next.sigma_dev = mix_blocks(graph, s.sigma_dev, q) + project_deviation(sigma_inc, N, q);
  next.r_dev = mix_blocks(graph, s.r_dev, m) + project_deviation(r_inc, N, m);
  next.lambda_dev = mix_blocks(graph, s.lambda_dev, m) + alpha * N * s.r_dev;
  return next;
}

double lyapunov(const Metric& met, const CompactState& s, const PrimalDual& xi_star) {
  return 0.5 * met.squared_norm_P(s.xi - xi_star) + s.chi_squared_norm();
}

double lyapunov(const Metric& met, const Game& g, const NetworkState& s,
                const PrimalDual& xi_star) {
  return lyapunov(met, compact_from_network(g, s), xi_star);
}

std::pair<std::vector<Vec>, std::vector<Vec>> random_network_start(const Game& g,
                                                                   std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<Vec> x0;
  std::vector<Vec> z0;
  for (int i = 0; i < g.agents(); ++i) {
    Vec x(g.dim_of(i));
    for (Eigen::Index k = 0; k < x.size(); ++k) x[k] = gauss(rng);
    Vec z(g.rows());
    for (Eigen::Index k = 0; k < z.size(); ++k) z[k] = gauss(rng);
    x0.push_back(std::move(x));
    z0.push_back(std::move(z));
  }
  return {x0, z0};
}

double tune_alpha(const Game& g, const Metric& met, const GraphSchedule& schedule,
                  int probe_horizon, std::uint64_t seed, const PrimalDual& xi_star,
                  double alpha_start) {
  if (probe_horizon < 10) throw std::invalid_argument("tune_alpha: probe_horizon must be >= 10");
  const auto [x0, z0] = random_network_start(g, seed);
  const NetworkState start = distributed_init(g, x0, z0);
  double alpha = alpha_start > 0 ? alpha_start : met.optimal_alpha();
  for (; alpha >= 1e-12; alpha /= 2) {
    bool stable = true;
    NetworkState s = start;
    double v_prev = lyapunov(met, g, s, xi_star);
    for (int k = 0; k < probe_horizon && stable; ++k) {
      try {
        s = distributed_round(g, schedule.at(k), s, alpha);
      } catch (const std::runtime_error&) {
        stable = false;
        break;
      }
      const double v = lyapunov(met, g, s, xi_star);
      if (!(v <= v_prev * (1 + 1e-12))) stable = false;
      v_prev = v;
    }
    if (stable) return alpha;
  }
  throw std::runtime_error("tune_alpha: no stable step found");
}

double tune_alpha(const Game& g, const Metric& met, const CommGraph& graph, int probe_horizon,
                  std::uint64_t seed, const PrimalDual& xi_star, double alpha_start) {
  return tune_alpha(g, met, constant_schedule(graph), probe_horizon, seed, xi_star, alpha_start);
}

}  // namespace gne
