#pragma once

#include "gne/game.hpp"

namespace gne {

/// Weighted primal-dual metric
///   P = [[I, nu A^T], [nu A, I]]
/// together with the strong-monotonicity modulus mu_op and Lipschitz constant
/// ell_op of the KKT operator measured in <.,.>_P. Immutable after
/// construction; P is applied in its structured block form and never
/// factorized densely.
class Metric {
 public:
  double nu() const { return nu_; }
  double mu_op() const { return mu_op_; }
  double ell_op() const { return ell_op_; }
  double lambda_min_P() const { return lam_min_; }
  double lambda_max_P() const { return lam_max_; }
  /// Largest eigenvalue of Q = diag(P/2, I).
  double lambda_max_Q() const { return std::max(lam_max_ / 2.0, 1.0); }

  /// Step size minimizing the contraction factor.
  double optimal_alpha() const { return mu_op_ / (ell_op_ * ell_op_); }
  /// Upper end of the certified step interval (0, 2 mu_op / ell_op^2).
  double alpha_limit() const { return 2.0 * mu_op_ / (ell_op_ * ell_op_); }

  /// <u, v>_P = u_x.v_x + nu (u_x^T A^T v_l + u_l^T A v_x) + u_l.v_l.
  double inner_P(const PrimalDual& u, const PrimalDual& v) const;
  double squared_norm_P(const PrimalDual& u) const;
  double norm_P(const PrimalDual& u) const;

  /// Dense P for small problems and tests.
  Mat dense_P() const;

 private:
  friend Metric build_metric(const Game&, const Constants&, double);
  SpMat A_;
  double nu_ = 0;
  double mu_op_ = 0;
  double ell_op_ = 0;
  double lam_min_ = 1;
  double lam_max_ = 1;
};

/// nu_max = 4 mu_F mu_A / (ell_F^2 ell_A^2 + 4 mu_A ell_A^2).
double nu_upper_bound(const Constants& c);

/// Metric moduli computed from declared constants alone, with ell_A standing
/// in for ||A||. Used for step-size validation without a game instance.
struct MetricBounds {
  double nu = 0;
  double mu_op = 0;
  double ell_op = 0;
  double lambda_min_P = 1;
  double lambda_max_P = 1;
  double optimal_alpha() const { return mu_op / (ell_op * ell_op); }
  double alpha_limit() const { return 2.0 * mu_op / (ell_op * ell_op); }
};
MetricBounds metric_bounds(const Constants& c, double safety = 0.5);

/// Builds the metric with nu = safety * min(nu_max, 1/ell_A). The spectral
/// extremes of P use the exact ||A|| of the game; the monotonicity modulus
/// comes from the 2x2 quadratic-form bound
///   G = [[mu_F - nu ell_A^2, -nu ell_F ell_A / 2],
///        [-nu ell_F ell_A / 2, nu mu_A]],
/// mu_op = lambda_min(G) / lambda_max(P), and
/// ell_op = (ell_F + ell_A) sqrt(lambda_max(P) / lambda_min(P)).
/// With m = 0 the dual block is empty and P = I.
Metric build_metric(const Game& g, const Constants& c, double safety = 0.5);

/// KKT operator value col(F(x) + A^T lambda, -Ax + b).
Vec kkt_apply(const Game& g, const PrimalDual& w);

/// Direct factorization oracle for affine games F(x) = Mx + c_vec:
/// solves [[M, A^T], [-A, 0]] omega = [-c_vec; -b]. Throws on a singular
/// KKT matrix.
PrimalDual solve_affine_kkt(const Mat& M, const Vec& c_vec, const Mat& A, const Vec& b);

/// rho(alpha) = 1 - 2 alpha mu_op + alpha^2 ell_op^2. Throws
/// std::invalid_argument when alpha lies outside (0, 2 mu_op / ell_op^2),
/// with the valid interval in the message.
double contraction_factor(const Metric& met, double alpha);

}  // namespace gne
