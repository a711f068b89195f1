#include "gne/game.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <random>
#include <utility>

namespace gne {

void Constants::validate() const {
  if (!(mu_F > 0) || !(ell_F >= mu_F)) {
    throw std::invalid_argument("constants: need 0 < mu_F <= ell_F");
  }
  if (!(mu_A > 0) || !(ell_A > 0) || mu_A > ell_A * ell_A * (1 + 1e-12)) {
    throw std::invalid_argument("constants: need 0 < mu_A <= ell_A^2");
  }
  if (ell_sigma < 0) {
    throw std::invalid_argument("constants: ell_sigma must be nonnegative");
  }
}

Vec PrimalDual::stacked() const {
  Vec w(x.size() + lambda.size());
  w.head(x.size()) = x;
  w.tail(lambda.size()) = lambda;
  return w;
}

PrimalDual PrimalDual::split(const Vec& omega, Eigen::Index primal_dim) {
  if (primal_dim < 0 || primal_dim > omega.size()) {
    throw std::invalid_argument("PrimalDual::split: bad primal dimension");
  }
  return {omega.head(primal_dim), omega.tail(omega.size() - primal_dim)};
}

PrimalDual PrimalDual::operator-(const PrimalDual& other) const {
  if (x.size() != other.x.size() || lambda.size() != other.lambda.size()) {
    throw std::invalid_argument("PrimalDual: dimension mismatch");
  }
  return {x - other.x, lambda - other.lambda};
}

Game::Game(int aggregate_dim, int constraint_rows, std::vector<Agent> agents)
    : q_(aggregate_dim), m_(constraint_rows), agents_(std::move(agents)) {
  if (q_ < 0 || m_ < 0 || agents_.empty()) {
    throw std::invalid_argument("game: need q >= 0, m >= 0 and at least one agent");
  }
  offsets_.reserve(agents_.size());
  for (const Agent& a : agents_) {
    if (a.dim <= 0) throw std::invalid_argument("game: agent dimension must be positive");
    if (!a.grad_local || !a.grad_agg || !a.phi || !a.dphi) {
      throw std::invalid_argument("game: every agent needs all four oracles");
    }
    if (a.A.rows() != m_ || a.A.cols() != a.dim) {
      throw std::invalid_argument("game: A_i must be m x n_i");
    }
    if (a.b.size() != m_) throw std::invalid_argument("game: b_i must have m entries");
    offsets_.push_back(n_);
    n_ += a.dim;
  }

  A_.resize(m_, n_);
  std::vector<Eigen::Triplet<double>> entries;
  b_ = Vec::Zero(m_);
  for (size_t i = 0; i < agents_.size(); ++i) {
    const int col0 = offsets_[i];
    for (int outer = 0; outer < agents_[i].A.outerSize(); ++outer) {
      for (SpMat::InnerIterator it(agents_[i].A, outer); it; ++it) {
        entries.emplace_back(static_cast<int>(it.row()), col0 + static_cast<int>(it.col()),
                             it.value());
      }
    }
    b_ += agents_[i].b;
  }
  A_.setFromTriplets(entries.begin(), entries.end());
}

Eigen::VectorBlock<const Vec> Game::block(const Vec& x, int i) const {
  if (x.size() != n_) throw std::invalid_argument("game: stacked vector has wrong dimension");
  return x.segment(offset_of(i), dim_of(i));
}

Vec Game::aggregate(const Vec& x) const {
  Vec acc = Vec::Zero(q_);
  for (int i = 0; i < agents(); ++i) {
    acc += agents_[static_cast<size_t>(i)].phi(block(x, i));
  }
  return acc / agents();
}

Vec Game::local_aggregate(int i, const Vec& x_i) const {
  return agents_[static_cast<size_t>(i)].phi(x_i);
}

SpMat Game::local_aggregate_jacobian(int i, const Vec& x_i) const {
  return agents_[static_cast<size_t>(i)].dphi(x_i);
}

Vec Game::extended_block(int i, const Vec& x_i, const Vec& sigma_est) const {
  const Agent& a = agents_[static_cast<size_t>(i)];
  if (x_i.size() != a.dim || sigma_est.size() != q_) {
    throw std::invalid_argument("extended_block: dimension mismatch");
  }
  Vec g = a.grad_local(x_i, sigma_est);
  if (g.size() != a.dim) {
    throw std::invalid_argument("extended_block: grad_local returned wrong dimension");
  }
  if (q_ > 0) {
    g += a.dphi(x_i).transpose() * a.grad_agg(x_i, sigma_est) / agents();
  }
  return g;
}

Vec Game::pseudo_gradient(const Vec& x) const {
  if (x.size() != n_) throw std::invalid_argument("pseudo_gradient: dimension mismatch");
  const Vec sigma = aggregate(x);
  Vec f(n_);
  for (int i = 0; i < agents(); ++i) {
    f.segment(offset_of(i), dim_of(i)) = extended_block(i, block(x, i), sigma);
  }
  return f;
}

Vec Game::residual(const Vec& x) const {
  if (x.size() != n_) throw std::invalid_argument("residual: dimension mismatch");
  Vec acc = Vec::Zero(m_);
  for (int i = 0; i < agents(); ++i) {
    const Agent& a = agents_[static_cast<size_t>(i)];
    acc += a.A * x.segment(offset_of(i), a.dim) - a.b;
  }
  return acc;
}

namespace {

Vec ball_sample(std::mt19937_64& rng, Eigen::Index dim, double radius, const Vec* center) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Vec v(dim);
  for (Eigen::Index k = 0; k < dim; ++k) v[k] = gauss(rng);
  double norm = v.norm();
  if (norm == 0) {
    v[0] = 1.0;
    norm = 1.0;
  }
  v *= radius * std::pow(unif(rng), 1.0 / static_cast<double>(dim)) / norm;
  if (center != nullptr) v += *center;
  return v;
}

}  // namespace

Constants estimate_constants(const Game& game, int sample_count, double radius,
                             std::uint64_t seed, const Vec* center) {
  if (sample_count < 2) throw std::invalid_argument("estimate_constants: need sample_count >= 2");
  if (radius <= 0) throw std::invalid_argument("estimate_constants: need radius > 0");
  if (center != nullptr && center->size() != game.dim()) {
    throw std::invalid_argument("estimate_constants: center has wrong dimension");
  }

  std::mt19937_64 rng(seed);
  Constants c;
  c.mu_F = std::numeric_limits<double>::infinity();
  c.ell_F = 0;
  c.ell_sigma = 0;

  for (int s = 0; s < sample_count; ++s) {
    const Vec x = ball_sample(rng, game.dim(), radius, center);
    const Vec y = ball_sample(rng, game.dim(), radius, center);
    const Vec d = x - y;
    const double dd = d.squaredNorm();
    if (dd < 1e-24) continue;
    const Vec fd = game.pseudo_gradient(x) - game.pseudo_gradient(y);
    c.mu_F = std::min(c.mu_F, d.dot(fd) / dd);
    c.ell_F = std::max(c.ell_F, fd.norm() / std::sqrt(dd));
    for (int i = 0; i < game.agents(); ++i) {
      const Vec di = game.block(x, i) - Vec(game.block(y, i));
      const double dn = di.norm();
      if (dn < 1e-12) continue;
      const Vec pd = game.local_aggregate(i, game.block(x, i)) -
                     game.local_aggregate(i, game.block(y, i));
      c.ell_sigma = std::max(c.ell_sigma, pd.norm() / dn);
    }
  }

  if (!(c.mu_F > 0)) {
    throw std::runtime_error("estimate_constants: game not strongly monotone on sampled region");
  }

  if (game.rows() > 0) {
    const Mat gram = Mat(game.coupling() * SpMat(game.coupling().transpose()));
    Eigen::SelfAdjointEigenSolver<Mat> eig(gram);
    c.mu_A = eig.eigenvalues().minCoeff();
    c.ell_A = std::sqrt(eig.eigenvalues().maxCoeff());
  } else {
    // No coupling rows: the dual block is empty and these moduli are unused.
    c.mu_A = 1.0;
    c.ell_A = 1.0;
  }
  return c;
}

}  // namespace gne
