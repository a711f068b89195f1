#pragma once

#include <string>
#include <vector>

namespace gne {

/// Shortest round-trip decimal representation ("%.17g").
std::string format_real(double v);

/// Iteration trace of the full-information solver.
/// CSV columns: iter,residual,lyapunov (lyapunov empty when no reference
/// point was supplied).
struct FullTrace {
  std::vector<double> residual;
  std::vector<double> lyapunov;

  void write_csv(const std::string& path) const;
};

/// Round trace of the distributed solver.
/// CSV columns: round,V,consensus_sigma,consensus_lambda,consensus_r,
/// kkt_residual (V empty when no reference point was supplied).
struct RoundTrace {
  std::vector<double> V;
  std::vector<double> consensus_sigma;
  std::vector<double> consensus_lambda;
  std::vector<double> consensus_r;
  std::vector<double> kkt_residual;

  void write_csv(const std::string& path) const;
};

/// Outer-step trace of the online trackers.
/// CSV columns: t,tracking_error_P,tracking_error_Q,bound,
/// constraint_violation.
struct TrackingTrace {
  std::vector<double> tracking_error_P;
  std::vector<double> tracking_error_Q;
  std::vector<double> bound;
  std::vector<double> constraint_violation;

  void write_csv(const std::string& path) const;
};

}  // namespace gne
