#include "gne/trace.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace gne {

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // binary: keep \n endings everywhere
  if (!out) throw std::runtime_error("cannot open trace file: " + path);
  return out;
}

}  // namespace

void FullTrace::write_csv(const std::string& path) const {
  std::ofstream out = open_out(path);
  out << "iter,residual,lyapunov\n";
  for (size_t k = 0; k < residual.size(); ++k) {
    out << k << "," << format_real(residual[k]) << ",";
    if (k < lyapunov.size()) out << format_real(lyapunov[k]);
    out << "\n";
  }
}

void RoundTrace::write_csv(const std::string& path) const {
  std::ofstream out = open_out(path);
  out << "round,V,consensus_sigma,consensus_lambda,consensus_r,kkt_residual\n";
  for (size_t k = 0; k < kkt_residual.size(); ++k) {
    out << k << ",";
    if (k < V.size()) out << format_real(V[k]);
    out << "," << format_real(consensus_sigma[k]) << "," << format_real(consensus_lambda[k])
        << "," << format_real(consensus_r[k]) << "," << format_real(kkt_residual[k]) << "\n";
  }
}

void TrackingTrace::write_csv(const std::string& path) const {
  std::ofstream out = open_out(path);
  out << "t,tracking_error_P,tracking_error_Q,bound,constraint_violation\n";
  for (size_t t = 0; t < tracking_error_P.size(); ++t) {
    out << t << "," << format_real(tracking_error_P[t]) << ","
        << format_real(tracking_error_Q[t]) << "," << format_real(bound[t]) << ","
        << format_real(constraint_violation[t]) << "\n";
  }
}

}  // namespace gne
