#include "gne/online.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace gne {

namespace {

bool same_sparse(const SpMat& a, const SpMat& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.nonZeros() != b.nonZeros()) return false;
  SpMat d = a - b;
  d.prune(0.0);
  return d.nonZeros() == 0;
}

}  // namespace

GameSequence::GameSequence(std::function<Game(int)> generator, int length)
    : gen_(std::move(generator)), length_(length) {
  if (!gen_ || length_ <= 0) {
    throw std::invalid_argument("GameSequence: need a generator and a positive length");
  }
}

const Game& GameSequence::at(int t) const {
  if (t < 0 || t >= length_) {
    throw std::out_of_range("GameSequence: index " + std::to_string(t) + " out of range");
  }
  auto it = cache_.find(t);
  if (it == cache_.end()) {
    it = cache_.emplace(t, gen_(t)).first;
    if (t != 0) {
      const Game& base = at(0);
      if (!same_sparse(base.coupling(), it->second.coupling())) {
        throw std::runtime_error("GameSequence: coupling matrix changed at t = " +
                                 std::to_string(t));
      }
    }
  }
  return it->second;
}

PrimalDual online_full_step(const GameSequence& seq, int t, const PrimalDual& prev,
                            double alpha, int K) {
  if (K < 1) throw std::invalid_argument("online_full_step: K must be a positive integer");
  PrimalDual y = prev;
  const Game& g = seq.at(t);
  for (int k = 0; k < K; ++k) {
    try {
      y = pd_step(g, y, alpha);
    } catch (const std::runtime_error&) {
      throw std::runtime_error("online_full_step: divergence at t = " + std::to_string(t) +
                               ", k = " + std::to_string(k));
    }
  }
  return y;
}

double tracking_bound_full(const Metric& met, double rho, int K, double delta) {
  if (!(rho > 0) || !(rho < 1)) throw std::invalid_argument("tracking_bound_full: need rho in (0,1)");
  if (K < 1) throw std::invalid_argument("tracking_bound_full: need K >= 1");
  const double r = std::pow(rho, K / 2.0);
  return r / (1.0 - r) * delta * std::sqrt(met.lambda_max_P());
}

NetworkState online_cold_start(const Game& g, const std::vector<Vec>& x0,
                               const std::vector<Vec>& z0) {
  if (static_cast<int>(x0.size()) != g.agents() || static_cast<int>(z0.size()) != g.agents()) {
    throw std::invalid_argument("online_cold_start: need one block per agent");
  }
  NetworkState s;
  s.agents.resize(static_cast<size_t>(g.agents()));
  for (int i = 0; i < g.agents(); ++i) {
    AgentState& a = s.agents[static_cast<size_t>(i)];
    a.x = x0[static_cast<size_t>(i)];
    a.z = z0[static_cast<size_t>(i)];
    if (a.x.size() != g.dim_of(i) || a.z.size() != g.rows()) {
      throw std::invalid_argument("online_cold_start: block dimension mismatch");
    }
    a.sigma = Vec::Zero(g.aggregate_dim());
    a.lambda = a.z;
    a.r = g.coupling_block(i) * a.x;
  }
  return s;
}

NetworkState online_distributed_step(const GameSequence& seq, int t, const CommGraph& graph,
                                     const NetworkState& prev, double alpha, int K) {
  if (K < 1) throw std::invalid_argument("online_distributed_step: K must be positive");
  const Game& gt = seq.at(t);
  NetworkState s = prev;
  // Re-initialization: align the tracked estimates with the new game. The
  // r adjustment is b^{t-1} - b^t so the mean-residual invariance carries
  // over to the new offsets.
  for (int i = 0; i < gt.agents(); ++i) {
    AgentState& a = s.agents[static_cast<size_t>(i)];
    if (t == 0) {
      a.sigma += gt.local_aggregate(i, a.x);
      a.r += -gt.offset_block(i);
    } else {
      const Game& gp = seq.at(t - 1);
      a.sigma += gt.local_aggregate(i, a.x) - gp.local_aggregate(i, a.x);
      a.r += gp.offset_block(i) - gt.offset_block(i);
    }
  }
  for (int k = 0; k < K; ++k) {
    s = distributed_round(gt, graph, s, alpha);
  }
  return s;
}

Vec reinit_perturbation(const GameSequence& seq, int t, const NetworkState& prev) {
  const Game& gt = seq.at(t);
  const int N = gt.agents();
  const Eigen::Index q = gt.aggregate_dim();
  const Eigen::Index m = gt.rows();
  Vec psi(N * (q + m));
  for (int i = 0; i < N; ++i) {
    const Vec& x_i = prev.agents[static_cast<size_t>(i)].x;
    Vec sigma_inc;
    Vec r_inc;
    if (t == 0) {
      sigma_inc = gt.local_aggregate(i, x_i);
      r_inc = -gt.offset_block(i);
    } else {
      const Game& gp = seq.at(t - 1);
      sigma_inc = gt.local_aggregate(i, x_i) - gp.local_aggregate(i, x_i);
      r_inc = gp.offset_block(i) - gt.offset_block(i);
    }
    psi.segment(i * q, q) = sigma_inc;
    psi.segment(N * q + i * m, m) = r_inc;
  }
  return psi;
}

double tracking_bound_distributed(const Metric& met, double eta, int K, double delta,
                                  double delta_phi, int agents, double ell_A) {
  if (!(eta > 0) || !(eta < 1)) {
    throw std::invalid_argument("tracking_bound_distributed: need eta in (0,1)");
  }
  if (K < 1) throw std::invalid_argument("tracking_bound_distributed: need K >= 1");
  const double e = std::pow(eta, K / 2.0);
  return e / (1.0 - e) * std::sqrt(met.lambda_max_Q()) *
         ((1.0 + agents * ell_A) * delta + delta_phi);
}

DriftEstimate measure_drift(const GameSequence& seq, const Metric& met, int horizon,
                            const DriftOptions& opt) {
  if (horizon < 2 || horizon > seq.length()) {
    throw std::invalid_argument("measure_drift: need 2 <= horizon <= sequence length");
  }
  DriftEstimate est;
  est.solutions.reserve(static_cast<size_t>(horizon));

  SolveOptions sopt;
  sopt.alpha = opt.alpha;
  sopt.tol = opt.tol;
  sopt.max_iter = opt.max_iter;
  PrimalDual warm{Vec::Zero(seq.at(0).dim()), Vec::Zero(seq.at(0).rows())};
  for (int t = 0; t < horizon; ++t) {
    const SolveResult res = solve(seq.at(t), met, sopt, warm);
    if (!res.converged) {
      throw std::runtime_error("measure_drift: per-t solve did not converge at t = " +
                               std::to_string(t));
    }
    warm = res.point;
    est.solutions.push_back(res.point);
  }
  for (int t = 0; t + 1 < horizon; ++t) {
    const Vec diff = (est.solutions[static_cast<size_t>(t + 1)] -
                      est.solutions[static_cast<size_t>(t)])
                         .stacked();
    est.delta = std::max(est.delta, diff.norm());
  }

  std::mt19937_64 rng(opt.probe_seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const Game& g0 = seq.at(0);
  for (int t = 0; t + 1 < horizon; ++t) {
    const Game& ga = seq.at(t);
    const Game& gb = seq.at(t + 1);
    for (int p = 0; p < opt.probe_points + 2; ++p) {
      Vec x(g0.dim());
      if (p == 0) {
        x = est.solutions[static_cast<size_t>(t)].x;
      } else if (p == 1) {
        x = est.solutions[static_cast<size_t>(t + 1)].x;
      } else {
        for (Eigen::Index k = 0; k < x.size(); ++k) x[k] = gauss(rng);
        const double norm = x.norm();
        if (norm > 0) {
          x *= opt.probe_radius * std::pow(unif(rng), 1.0 / static_cast<double>(x.size())) / norm;
        }
      }
      double sq = 0;
      for (int i = 0; i < g0.agents(); ++i) {
        sq += (ga.local_aggregate(i, g0.block(x, i)) - gb.local_aggregate(i, g0.block(x, i)))
                  .squaredNorm();
      }
      est.delta_phi = std::max(est.delta_phi, std::sqrt(sq));
    }
  }
  return est;
}

}  // namespace gne
