#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

namespace gne {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using SpMat = Eigen::SparseMatrix<double>;

/// Gradient of J_i with respect to the agent's own decision, at a given
/// aggregate value: (x_i, sigma) -> R^{n_i}.
using LocalGrad = std::function<Vec(const Vec&, const Vec&)>;
/// Gradient of J_i with respect to the aggregate: (x_i, sigma) -> R^{q}.
using AggGrad = std::function<Vec(const Vec&, const Vec&)>;
/// Local aggregation map phi_i: x_i -> R^{q}.
using AggMap = std::function<Vec(const Vec&)>;
/// Jacobian of phi_i: x_i -> (q x n_i).
using AggJac = std::function<SpMat(const Vec&)>;

/// Regularity moduli of a game: strong monotonicity / Lipschitz constants of
/// the pseudo-gradient, spectral bounds of the coupling matrix, and the
/// Lipschitz constant of the aggregation maps.
struct Constants {
  double mu_F = 0;
  double ell_F = 0;
  double mu_A = 0;
  double ell_A = 0;
  double ell_sigma = 0;

  /// Throws std::invalid_argument unless 0 < mu_F <= ell_F and
  /// 0 < mu_A <= ell_A^2.
  void validate() const;
};

/// Primal-dual pair omega = col(x, lambda).
struct PrimalDual {
  Vec x;
  Vec lambda;

  Eigen::Index size() const { return x.size() + lambda.size(); }
  Vec stacked() const;
  static PrimalDual split(const Vec& omega, Eigen::Index primal_dim);

  PrimalDual operator-(const PrimalDual& other) const;
};

/// An aggregative game among N agents with affine equality coupling
/// constraints Ax = b, where A = [A_1 ... A_N] and b = sum_i b_i.
///
/// Every oracle is a pure function of its arguments; a Game is immutable
/// after construction and safe to share across threads.
class Game {
 public:
  struct Agent {
    int dim = 0;           // n_i
    LocalGrad grad_local;  // nabla_{x_i} J_i(x_i, sigma)
    AggGrad grad_agg;      // nabla_sigma J_i(x_i, sigma)
    AggMap phi;
    AggJac dphi;
    SpMat A;               // m x n_i
    Vec b;                 // R^m
  };

  Game(int aggregate_dim, int constraint_rows, std::vector<Agent> agents);

  int agents() const { return static_cast<int>(agents_.size()); }
  int dim() const { return n_; }               // n = sum n_i
  int rows() const { return m_; }              // m
  int aggregate_dim() const { return q_; }     // q
  int dim_of(int i) const { return agents_[static_cast<size_t>(i)].dim; }
  int offset_of(int i) const { return offsets_[static_cast<size_t>(i)]; }

  const SpMat& coupling_block(int i) const { return agents_[static_cast<size_t>(i)].A; }
  const Vec& offset_block(int i) const { return agents_[static_cast<size_t>(i)].b; }
  const SpMat& coupling() const { return A_; }
  const Vec& offset() const { return b_; }

  /// View of agent i's block inside a stacked decision vector.
  Eigen::VectorBlock<const Vec> block(const Vec& x, int i) const;

  /// sigma(x) = (1/N) sum_i phi_i(x_i), accumulated in agent order.
  Vec aggregate(const Vec& x) const;

  Vec local_aggregate(int i, const Vec& x_i) const;
  SpMat local_aggregate_jacobian(int i, const Vec& x_i) const;

  /// Extended local mapping
  ///   F_i(x_i, sigma_i) = grad_local + (1/N) dphi(x_i)^T grad_agg,
  /// evaluated at an aggregate estimate sigma_est.
  Vec extended_block(int i, const Vec& x_i, const Vec& sigma_est) const;

  /// Pseudo-gradient F(x): extended blocks evaluated at the true aggregate.
  Vec pseudo_gradient(const Vec& x) const;

  /// Ax - b, accumulated agent by agent as sum_i (A_i x_i - b_i).
  Vec residual(const Vec& x) const;

 private:
  int q_ = 0;
  int m_ = 0;
  int n_ = 0;
  std::vector<Agent> agents_;
  std::vector<int> offsets_;
  SpMat A_;
  Vec b_;
};

/// Samples `sample_count` point pairs from a uniform ball (radius `radius`
/// around `center`, origin when null) and certifies the regularity moduli:
/// mu_F / ell_F / ell_sigma are sampled estimates of the monotonicity and
/// Lipschitz moduli, mu_A = lambda_min(A A^T) and ell_A = ||A|| are exact.
/// Deterministic for a fixed seed. Throws std::runtime_error if the sampled
/// monotonicity modulus is not positive.
Constants estimate_constants(const Game& game, int sample_count, double radius,
                             std::uint64_t seed, const Vec* center = nullptr);

}  // namespace gne
