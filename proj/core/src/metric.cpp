#include "gne/metric.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <cmath>
#include <sstream>

namespace gne {

namespace {

double spectral_norm(const SpMat& A) {
  if (A.rows() == 0 || A.cols() == 0) return 0.0;
  const Mat gram = Mat(A * SpMat(A.transpose()));
  Eigen::SelfAdjointEigenSolver<Mat> eig(gram);
  return std::sqrt(std::max(0.0, eig.eigenvalues().maxCoeff()));
}

// Smallest eigenvalue of the symmetric 2x2 matrix [[a, b], [b, d]].
double eig2_min(double a, double b, double d) {
  const double mean = 0.5 * (a + d);
  const double disc = std::sqrt(0.25 * (a - d) * (a - d) + b * b);
  return mean - disc;
}

}  // namespace

double Metric::inner_P(const PrimalDual& u, const PrimalDual& v) const {
  double value = u.x.dot(v.x) + u.lambda.dot(v.lambda);
  if (nu_ != 0.0 && A_.rows() > 0) {
    value += nu_ * ((A_ * u.x).dot(v.lambda) + (A_ * v.x).dot(u.lambda));
  }
  return value;
}

double Metric::squared_norm_P(const PrimalDual& u) const { return inner_P(u, u); }

double Metric::norm_P(const PrimalDual& u) const {
  return std::sqrt(std::max(0.0, squared_norm_P(u)));
}

Mat Metric::dense_P() const {
  const Eigen::Index n = A_.cols();
  const Eigen::Index m = A_.rows();
  Mat P = Mat::Identity(n + m, n + m);
  if (m > 0) {
    const Mat Ad = Mat(A_);
    P.topRightCorner(n, m) = nu_ * Ad.transpose();
    P.bottomLeftCorner(m, n) = nu_ * Ad;
  }
  return P;
}

double nu_upper_bound(const Constants& c) {
  c.validate();
  return 4.0 * c.mu_F * c.mu_A /
         (c.ell_F * c.ell_F * c.ell_A * c.ell_A + 4.0 * c.mu_A * c.ell_A * c.ell_A);
}

namespace {

MetricBounds bounds_from(const Constants& c, double safety, double a_norm) {
  MetricBounds mb;
  mb.nu = safety * std::min(nu_upper_bound(c), 1.0 / c.ell_A);
  mb.lambda_min_P = 1.0 - mb.nu * a_norm;
  mb.lambda_max_P = 1.0 + mb.nu * a_norm;
  const double g11 = c.mu_F - mb.nu * c.ell_A * c.ell_A;
  const double g12 = -mb.nu * c.ell_F * c.ell_A / 2.0;
  const double g22 = mb.nu * c.mu_A;
  const double g_min = eig2_min(g11, g12, g22);
  if (!(g_min > 0)) {
    throw std::runtime_error("metric construction failed; shrink safety");
  }
  mb.mu_op = g_min / mb.lambda_max_P;
  mb.ell_op = (c.ell_F + c.ell_A) * std::sqrt(mb.lambda_max_P / mb.lambda_min_P);
  return mb;
}

}  // namespace

MetricBounds metric_bounds(const Constants& c, double safety) {
  if (!(safety > 0) || !(safety < 1)) {
    throw std::invalid_argument("metric_bounds: safety must lie in (0, 1)");
  }
  return bounds_from(c, safety, c.ell_A);
}

Metric build_metric(const Game& g, const Constants& c, double safety) {
  if (!(safety > 0) || !(safety < 1)) {
    throw std::invalid_argument("build_metric: safety must lie in (0, 1)");
  }
  Metric met;
  met.A_ = g.coupling();
  if (g.rows() == 0) {
    // Degenerate dual block: P = I and the KKT operator reduces to F.
    c.validate();
    met.nu_ = 0;
    met.mu_op_ = c.mu_F;
    met.ell_op_ = c.ell_F;
    met.lam_min_ = met.lam_max_ = 1.0;
    return met;
  }
  const MetricBounds mb = bounds_from(c, safety, spectral_norm(g.coupling()));
  met.nu_ = mb.nu;
  met.mu_op_ = mb.mu_op;
  met.ell_op_ = mb.ell_op;
  met.lam_min_ = mb.lambda_min_P;
  met.lam_max_ = mb.lambda_max_P;
  return met;
}

Vec kkt_apply(const Game& g, const PrimalDual& w) {
  if (w.x.size() != g.dim() || w.lambda.size() != g.rows()) {
    throw std::invalid_argument("kkt_apply: dimension mismatch");
  }
  Vec out(g.dim() + g.rows());
  const Vec sigma = g.aggregate(w.x);
  for (int i = 0; i < g.agents(); ++i) {
    out.segment(g.offset_of(i), g.dim_of(i)) =
        g.extended_block(i, g.block(w.x, i), sigma) +
        g.coupling_block(i).transpose() * w.lambda;
  }
  out.tail(g.rows()) = -g.residual(w.x);
  return out;
}

PrimalDual solve_affine_kkt(const Mat& M, const Vec& c_vec, const Mat& A, const Vec& b) {
  const Eigen::Index n = M.rows();
  const Eigen::Index m = A.rows();
  if (M.cols() != n || c_vec.size() != n || (m > 0 && A.cols() != n) || b.size() != m) {
    throw std::invalid_argument("solve_affine_kkt: dimension mismatch");
  }
  Mat K = Mat::Zero(n + m, n + m);
  K.topLeftCorner(n, n) = M;
  if (m > 0) {
    K.topRightCorner(n, m) = A.transpose();
    K.bottomLeftCorner(m, n) = -A;
  }
  Vec rhs(n + m);
  rhs.head(n) = -c_vec;
  rhs.tail(m) = -b;
  Eigen::FullPivLU<Mat> lu(K);
  if (!lu.isInvertible()) {
    throw std::runtime_error("solve_affine_kkt: degenerate affine game");
  }
  return PrimalDual::split(lu.solve(rhs), n);
}

double contraction_factor(const Metric& met, double alpha) {
  const double limit = met.alpha_limit();
  if (!(alpha > 0) || !(alpha < limit)) {
    std::ostringstream msg;
    msg << "contraction_factor: inadmissible step size " << alpha
        << "; valid interval is (0, " << limit << ")";
    throw std::invalid_argument(msg.str());
  }
  const double rho =
      1.0 - 2.0 * alpha * met.mu_op() + alpha * alpha * met.ell_op() * met.ell_op();
  if (!(rho < 1.0)) {
    throw std::runtime_error("contraction_factor: rho >= 1 inside the admissible window");
  }
  return rho;
}

}  // namespace gne
