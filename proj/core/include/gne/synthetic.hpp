#pragma once

#include "gne/game.hpp"
#include "gne/online.hpp"

#include <cstdint>
#include <functional>

namespace gne {

/// Seeded affine aggregative game with exactly known regularity constants:
/// J_i(x_i, sigma) = h_i/2 ||x_i||^2 + c_i^T x_i + coupling x_i^T sigma with
/// phi_i = identity, so the pseudo-gradient is F(x) = M x + c0 with a
/// symmetric positive definite M. The coupling matrix is built from a seeded
/// SVD with singular values in [s_min, s_max], so mu_A and ell_A are exact.
struct AffineGameParams {
  int agents = 4;
  int agent_dim = 2;
  int rows = 3;
  double coupling = 0.4;
  double h_min = 1.0;
  double h_max = 2.0;
  double s_min = 0.8;
  double s_max = 1.4;
};

struct AffineGame {
  Game game;
  Mat M;
  Vec c0;
  Mat A;
  Vec b;
  Constants exact;
};

AffineGame make_affine_game(const AffineGameParams& p, std::uint64_t seed);

/// Drifting variant sharing A: the constraint offsets drift linearly along a
/// fixed direction (b_i^t = b_i + t (b_step/N) u) and the aggregation maps
/// carry a bounded sinusoidal offset (phi_i^t = x_i + phi_amp sin(...) u_q),
/// which keeps Assumption-style drift bounds exact and global.
struct AffineSequenceParams {
  AffineGameParams game;
  int length = 200;
  double b_step = 0.01;
  double phi_amp = 0.0;
  double phi_freq = 0.3;
};

struct AffineSequence {
  GameSequence seq;
  Mat M;
  Mat A;
  Constants exact;
  std::function<Vec(int)> cost_offset;        // c^t (phi drift folded in)
  std::function<Vec(int)> constraint_offset;  // b^t

  /// Ground-truth omega*_t from the direct KKT factorization.
  PrimalDual oracle_solution(int t) const;
};

AffineSequence make_drifting_sequence(const AffineSequenceParams& p, std::uint64_t seed);

}  // namespace gne
