#include "gne/synthetic.hpp"

#include "gne/metric.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <cmath>
#include <random>

namespace gne {

namespace {

Mat random_gaussian(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Mat g(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) g(i, j) = gauss(rng);
  }
  return g;
}

// Coupling matrix with prescribed singular values: A = U diag(s) V^T.
Mat controlled_coupling(std::mt19937_64& rng, int m, int n, double s_min, double s_max) {
  const Mat qu = Eigen::HouseholderQR<Mat>(random_gaussian(rng, m, m)).householderQ();
  Mat qv = Eigen::HouseholderQR<Mat>(random_gaussian(rng, n, m)).householderQ();
  qv.conservativeResize(n, m);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Vec s(m);
  for (int k = 0; k < m; ++k) s[k] = s_min + (s_max - s_min) * unif(rng);
  s[0] = s_min;
  if (m > 1) s[m - 1] = s_max;
  return qu * s.asDiagonal() * qv.transpose();
}

struct AffineParts {
  std::vector<double> h;
  Vec c0;
  Mat M;
  Mat A;
  Vec b;
  Constants exact;
};

AffineParts make_parts(const AffineGameParams& p, std::mt19937_64& rng) {
  if (p.agents < 1 || p.agent_dim < 1 || p.rows < 0 || !(p.h_min > 0) || p.h_max < p.h_min) {
    throw std::invalid_argument("affine game: bad parameters");
  }
  const int N = p.agents;
  const int q = p.agent_dim;
  const int n = N * q;
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);

  AffineParts parts;
  parts.h.resize(static_cast<size_t>(N));
  for (int i = 0; i < N; ++i) parts.h[static_cast<size_t>(i)] = p.h_min + (p.h_max - p.h_min) * unif(rng);
  parts.c0.resize(n);
  for (int k = 0; k < n; ++k) parts.c0[k] = gauss(rng);

  parts.M = Mat::Zero(n, n);
  for (int i = 0; i < N; ++i) {
    parts.M.block(i * q, i * q, q, q) =
        (parts.h[static_cast<size_t>(i)] + p.coupling / N) * Mat::Identity(q, q);
    for (int j = 0; j < N; ++j) {
      parts.M.block(i * q, j * q, q, q) += (p.coupling / N) * Mat::Identity(q, q);
    }
  }

  if (p.rows > 0) {
    parts.A = controlled_coupling(rng, p.rows, n, p.s_min, p.s_max);
    Vec x_feas(n);
    for (int k = 0; k < n; ++k) x_feas[k] = gauss(rng);
    parts.b = parts.A * x_feas;
  } else {
    parts.A = Mat::Zero(0, n);
    parts.b = Vec::Zero(0);
  }

  Eigen::SelfAdjointEigenSolver<Mat> eig(parts.M);
  parts.exact.mu_F = eig.eigenvalues().minCoeff();
  parts.exact.ell_F = eig.eigenvalues().maxCoeff();
  parts.exact.mu_A = p.rows > 0 ? p.s_min * p.s_min : 1.0;
  parts.exact.ell_A = p.rows > 0 ? p.s_max : 1.0;
  parts.exact.ell_sigma = 1.0;
  return parts;
}

SpMat sparse_identity(int q) {
  SpMat id(q, q);
  id.setIdentity();
  return id;
}

SpMat dense_to_sparse(const Mat& d) {
  SpMat s(d.rows(), d.cols());
  std::vector<Eigen::Triplet<double>> trip;
  for (Eigen::Index i = 0; i < d.rows(); ++i) {
    for (Eigen::Index j = 0; j < d.cols(); ++j) {
      if (d(i, j) != 0.0) trip.emplace_back(static_cast<int>(i), static_cast<int>(j), d(i, j));
    }
  }
  s.setFromTriplets(trip.begin(), trip.end());
  return s;
}

// Aggregation offsets shared by the drifting sequences; bounded in t.
Vec phi_offset(int q, int agent, int t, double amp, double freq) {
  return amp * std::sin(freq * t + 0.7 * agent) * Vec::Ones(q) / std::sqrt(q);
}

}  // namespace

AffineGame make_affine_game(const AffineGameParams& p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  AffineParts parts = make_parts(p, rng);
  const int N = p.agents;
  const int q = p.agent_dim;

  std::vector<Game::Agent> agents;
  agents.reserve(static_cast<size_t>(N));
  for (int i = 0; i < N; ++i) {
    Game::Agent a;
    a.dim = q;
    const double h = parts.h[static_cast<size_t>(i)];
    const double coupling = p.coupling;
    const Vec c_i = parts.c0.segment(i * q, q);
    a.grad_local = [h, coupling, c_i](const Vec& x, const Vec& sigma) {
      return Vec(h * x + c_i + coupling * sigma);
    };
    a.grad_agg = [coupling](const Vec& x, const Vec&) { return Vec(coupling * x); };
    a.phi = [](const Vec& x) { return x; };
    const SpMat id = sparse_identity(q);
    a.dphi = [id](const Vec&) { return id; };
    a.A = dense_to_sparse(parts.A.middleCols(i * q, q));
    a.b = parts.b / N;
    agents.push_back(std::move(a));
  }
  return AffineGame{Game(q, p.rows, std::move(agents)), std::move(parts.M),
                    std::move(parts.c0), std::move(parts.A), std::move(parts.b),
                    parts.exact};
}

PrimalDual AffineSequence::oracle_solution(int t) const {
  return solve_affine_kkt(M, cost_offset(t), A, constraint_offset(t));
}

AffineSequence make_drifting_sequence(const AffineSequenceParams& p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  AffineParts parts = make_parts(p.game, rng);
  const int N = p.game.agents;
  const int q = p.game.agent_dim;
  const int m = p.game.rows;

  std::normal_distribution<double> gauss(0.0, 1.0);
  Vec drift_dir = Vec::Zero(m);
  if (m > 0) {
    for (int k = 0; k < m; ++k) drift_dir[k] = gauss(rng);
    drift_dir.normalize();
  }

  const double amp = p.phi_amp;
  const double freq = p.phi_freq;
  const double b_step = p.b_step;
  const AffineParts shared = parts;
  const double coupling = p.game.coupling;

  auto gen = [shared, N, q, m, amp, freq, b_step, drift_dir, coupling](int t) {
    std::vector<Game::Agent> agents;
    agents.reserve(static_cast<size_t>(N));
    for (int i = 0; i < N; ++i) {
      Game::Agent a;
      a.dim = q;
      const double h = shared.h[static_cast<size_t>(i)];
      const Vec c_i = shared.c0.segment(i * q, q);
      a.grad_local = [h, coupling, c_i](const Vec& x, const Vec& sigma) {
        return Vec(h * x + c_i + coupling * sigma);
      };
      a.grad_agg = [coupling](const Vec& x, const Vec&) { return Vec(coupling * x); };
      const Vec off = phi_offset(q, i, t, amp, freq);
      a.phi = [off](const Vec& x) { return Vec(x + off); };
      const SpMat id = sparse_identity(q);
      a.dphi = [id](const Vec&) { return id; };
      a.A = dense_to_sparse(shared.A.middleCols(i * q, q));
      a.b = shared.b / N + (t * b_step / N) * drift_dir;
      agents.push_back(std::move(a));
    }
    return Game(q, m, std::move(agents));
  };

  AffineSequence s{GameSequence(gen, p.length), parts.M, parts.A, parts.exact, {}, {}};
  s.cost_offset = [parts_c0 = parts.c0, N, q, amp, freq, coupling](int t) {
    Vec mean_off = Vec::Zero(q);
    for (int i = 0; i < N; ++i) mean_off += phi_offset(q, i, t, amp, freq);
    mean_off /= N;
    Vec c = parts_c0;
    for (int i = 0; i < N; ++i) c.segment(i * q, q) += coupling * mean_off;
    return c;
  };
  s.constraint_offset = [b0 = parts.b, b_step, drift_dir](int t) {
    return Vec(b0 + (t * b_step) * drift_dir);
  };
  return s;
}

}  // namespace gne
