#include "gne/graph.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <random>
#include <sstream>
#include <stdexcept>

namespace gne {

namespace {

void check_adjacency(const Eigen::MatrixXi& adj) {
  if (adj.rows() != adj.cols() || adj.rows() == 0) {
    throw std::invalid_argument("adjacency must be square and nonempty");
  }
  for (int i = 0; i < adj.rows(); ++i) {
    if (adj(i, i) != 0) throw std::invalid_argument("adjacency must have a zero diagonal");
    for (int j = 0; j < adj.cols(); ++j) {
      if (adj(i, j) != adj(j, i)) throw std::invalid_argument("adjacency must be symmetric");
      if (adj(i, j) != 0 && adj(i, j) != 1) {
        throw std::invalid_argument("adjacency entries must be 0 or 1");
      }
    }
  }
}

}  // namespace

CommGraph::CommGraph(Eigen::MatrixXd weights, bool connected)
    : W_(std::move(weights)), connected_(connected) {
  if (W_.rows() != W_.cols() || W_.rows() == 0) {
    throw std::invalid_argument("weight matrix must be square and nonempty");
  }
  const int n = static_cast<int>(W_.rows());
  const double tol = 1e-12;
  for (int i = 0; i < n; ++i) {
    if (std::abs(W_.row(i).sum() - 1.0) > tol || std::abs(W_.col(i).sum() - 1.0) > tol) {
      throw std::invalid_argument("weight matrix must be doubly stochastic");
    }
    if (!(W_(i, i) > 0)) throw std::invalid_argument("weight matrix needs positive self-loops");
  }
  neighbors_.resize(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (j != i && W_(i, j) > 0) neighbors_[static_cast<size_t>(i)].push_back(j);
    }
  }
  theta_ = contraction_theta(W_);
}

CommGraph metropolis_weights(const Eigen::MatrixXi& adjacency) {
  check_adjacency(adjacency);
  const int n = static_cast<int>(adjacency.rows());
  Eigen::VectorXi degree = adjacency.rowwise().sum();
  Eigen::MatrixXd W = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    double off = 0;
    for (int j = 0; j < n; ++j) {
      if (adjacency(i, j) != 0) {
        W(i, j) = 1.0 / (1.0 + std::max(degree[i], degree[j]));
        off += W(i, j);
      }
    }
    W(i, i) = 1.0 - off;
  }
  return CommGraph(std::move(W), is_connected(adjacency));
}

double contraction_theta(const Eigen::MatrixXd& W) {
  const int n = static_cast<int>(W.rows());
  const Eigen::MatrixXd dev =
      W - Eigen::MatrixXd::Constant(n, n, 1.0 / static_cast<double>(n));
  return Eigen::JacobiSVD<Eigen::MatrixXd>(dev).singularValues().maxCoeff();
}

GraphSchedule constant_schedule(CommGraph g) {
  GraphSchedule s;
  s.cycle.push_back(std::move(g));
  s.window = 1;
  return s;
}

double windowed_contraction(const GraphSchedule& s, int k) {
  if (s.cycle.empty() || s.window <= 0) {
    throw std::invalid_argument("windowed_contraction: empty schedule");
  }
  const int start = k * s.window;
  Eigen::MatrixXd prod = s.at(start).weights();
  for (int j = start + 1; j <= start + s.window; ++j) {
    prod = prod * s.at(j).weights();
  }
  return contraction_theta(prod);
}

Eigen::MatrixXi ring_adjacency(int n) {
  if (n < 3) throw std::invalid_argument("ring needs at least 3 nodes");
  Eigen::MatrixXi adj = Eigen::MatrixXi::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const int j = (i + 1) % n;
    adj(i, j) = adj(j, i) = 1;
  }
  return adj;
}

Eigen::MatrixXi path_adjacency(int n) {
  if (n < 2) throw std::invalid_argument("path needs at least 2 nodes");
  Eigen::MatrixXi adj = Eigen::MatrixXi::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) adj(i, i + 1) = adj(i + 1, i) = 1;
  return adj;
}

Eigen::MatrixXi complete_adjacency(int n) {
  if (n < 2) throw std::invalid_argument("complete graph needs at least 2 nodes");
  Eigen::MatrixXi adj = Eigen::MatrixXi::Ones(n, n);
  adj.diagonal().setZero();
  return adj;
}

bool is_connected(const Eigen::MatrixXi& adjacency) {
  const int n = static_cast<int>(adjacency.rows());
  std::vector<bool> seen(static_cast<size_t>(n), false);
  std::vector<int> stack{0};
  seen[0] = true;
  int count = 1;
  while (!stack.empty()) {
    const int i = stack.back();
    stack.pop_back();
    for (int j = 0; j < n; ++j) {
      if (adjacency(i, j) != 0 && !seen[static_cast<size_t>(j)]) {
        seen[static_cast<size_t>(j)] = true;
        stack.push_back(j);
        ++count;
      }
    }
  }
  return count == n;
}

Eigen::MatrixXi random_connected_adjacency(int n, double edge_prob, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("need at least 2 nodes");
  if (!(edge_prob > 0) || edge_prob > 1) {
    throw std::invalid_argument("edge probability must lie in (0, 1]");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int attempt = 0; attempt < 10000; ++attempt) {
    Eigen::MatrixXi adj = Eigen::MatrixXi::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        if (unif(rng) < edge_prob) adj(i, j) = adj(j, i) = 1;
      }
    }
    if (is_connected(adj)) return adj;
  }
  throw std::runtime_error("random_connected_adjacency: no connected sample found");
}

GraphSchedule alternating_matching_schedule(int n) {
  if (n < 4 || n % 2 != 0) {
    throw std::invalid_argument("alternating matchings need an even n >= 4");
  }
  Eigen::MatrixXi even = Eigen::MatrixXi::Zero(n, n);
  Eigen::MatrixXi odd = Eigen::MatrixXi::Zero(n, n);
  for (int i = 0; i < n; i += 2) {
    even(i, i + 1) = even(i + 1, i) = 1;
    const int j = (i + 2) % n;
    odd(i + 1, j) = odd(j, i + 1) = 1;
  }
  GraphSchedule s;
  s.cycle.push_back(metropolis_weights(even));
  s.cycle.push_back(metropolis_weights(odd));
  s.window = 2;
  return s;
}

std::string to_edge_list(const Eigen::MatrixXi& adjacency) {
  check_adjacency(adjacency);
  std::ostringstream out;
  for (int i = 0; i < adjacency.rows(); ++i) {
    for (int j = i + 1; j < adjacency.cols(); ++j) {
      if (adjacency(i, j) != 0) out << i << " " << j << "\n";
    }
  }
  return out.str();
}

Eigen::MatrixXi adjacency_from_edge_list(const std::string& text, int n) {
  std::istringstream in(text);
  std::vector<std::pair<int, int>> edges;
  int max_node = -1;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    int i = -1;
    int j = -1;
    if (!(ls >> i >> j) || i < 0 || j < 0 || i == j) {
      throw std::invalid_argument("edge list: expected two distinct nonnegative indices per line");
    }
    edges.emplace_back(i, j);
    max_node = std::max({max_node, i, j});
  }
  const int size = n > 0 ? n : max_node + 1;
  if (size <= 0 || max_node >= size) {
    throw std::invalid_argument("edge list: node index out of range");
  }
  Eigen::MatrixXi adj = Eigen::MatrixXi::Zero(size, size);
  for (const auto& [i, j] : edges) adj(i, j) = adj(j, i) = 1;
  return adj;
}

}  // namespace gne
