#pragma once

// Dense beta = 2 oracle: X is n x (n + a) with independent complex Gaussian
// entries, E|X_ij|^2 = 1, so the eigenvalues of X X^* have weight l^a e^{-l}.
// Requires Eigen.

#include <Eigen/Dense>

#include <cmath>
#include <random>
#include <vector>

#include "hardedge/mc.hpp"

namespace hardedge::mc {

inline std::vector<double> sample_smallest_dense(const EnsembleSpec& s, std::size_t replicas) {
  s.validate();
  if (s.beta != 2.0) throw DomainError("the dense oracle is complex (beta = 2)");
  if (s.a != std::floor(s.a) || s.a < 0) throw DomainError("the dense oracle needs integer a >= 0");
  if (replicas < 1) throw DomainError("replicas must be at least 1");
  const int m = s.n + static_cast<int>(s.a);
  std::vector<double> out(replicas);
  std::normal_distribution<double> g(0.0, std::sqrt(0.5));
  for (std::size_t r = 0; r < replicas; ++r) {
    auto rng = replica_engine(s.seed, r);
    Eigen::MatrixXcd X(s.n, m);
    for (int i = 0; i < s.n; ++i) {
      for (int j = 0; j < m; ++j) {
        const double re = g(rng);
        X(i, j) = {re, g(rng)};
      }
    }
    const Eigen::MatrixXcd W = X * X.adjoint();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(W, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw ConvergenceFailed("dense eigensolve failed");
    out[r] = s.n * es.eigenvalues()(0);
  }
  return out;
}

}  // namespace hardedge::mc
