#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>
#include <vector>

namespace gne {

/// Undirected communication graph with a doubly stochastic, self-looped
/// weight matrix W and its contraction factor theta = ||W - (1/N) 11^T||.
/// Immutable after construction.
class CommGraph {
 public:
  CommGraph(Eigen::MatrixXd weights, bool connected);

  int size() const { return static_cast<int>(W_.rows()); }
  double weight(int i, int j) const { return W_(i, j); }
  const Eigen::MatrixXd& weights() const { return W_; }
  /// Sorted indices j != i with w_{i,j} > 0.
  const std::vector<int>& neighbors(int i) const { return neighbors_[static_cast<size_t>(i)]; }
  double theta() const { return theta_; }
  /// True when the underlying graph is connected, i.e. theta < 1 is certified.
  bool mixing() const { return connected_; }

 private:
  Eigen::MatrixXd W_;
  std::vector<std::vector<int>> neighbors_;
  double theta_ = 1.0;
  bool connected_ = false;
};

/// Metropolis-Hastings weights: w_{i,j} = 1 / (1 + max(d_i, d_j)) on edges,
/// diagonal set to the row complement. Always doubly stochastic with strictly
/// positive self-loops. A disconnected adjacency is accepted and flagged via
/// mixing() == false (valid only inside a Q-connected schedule).
CommGraph metropolis_weights(const Eigen::MatrixXi& adjacency);

/// theta = ||W - (1/N) 11^T|| (spectral norm).
double contraction_theta(const Eigen::MatrixXd& W);

/// Periodic schedule of weight matrices with a contraction window Q.
struct GraphSchedule {
  std::vector<CommGraph> cycle;
  int window = 1;  // Q

  const CommGraph& at(int k) const { return cycle[static_cast<size_t>(k) % cycle.size()]; }
};

GraphSchedule constant_schedule(CommGraph g);

/// ||W^{kQ} W^{kQ+1} ... W^{(k+1)Q} - (1/N) 11^T|| over the window starting
/// at index kQ (inclusive product of Q+1 factors, as the windowed condition
/// is stated).
double windowed_contraction(const GraphSchedule& s, int k);

Eigen::MatrixXi ring_adjacency(int n);
Eigen::MatrixXi path_adjacency(int n);
Eigen::MatrixXi complete_adjacency(int n);

bool is_connected(const Eigen::MatrixXi& adjacency);

/// Erdos-Renyi adjacency, rejection-resampled until connected. Deterministic
/// for a fixed seed.
Eigen::MatrixXi random_connected_adjacency(int n, double edge_prob, std::uint64_t seed);

/// Two alternating matchings over an even ring 0-1, 2-3, ... and
/// 1-2, 3-4, ..., (n-1)-0; each is disconnected, their union is the n-ring.
GraphSchedule alternating_matching_schedule(int n);

/// One "i j" pair per line, 0-indexed, i < j.
std::string to_edge_list(const Eigen::MatrixXi& adjacency);
Eigen::MatrixXi adjacency_from_edge_list(const std::string& text, int n = -1);

}  // namespace gne
