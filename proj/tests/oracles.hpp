/*
 * SPDX-FileCopyrightText: Copyright (c) 2026, nacgof contributors.
 * SPDX-License-Identifier: Apache-2.0
 */

// Straightforward O(n^2) reference implementations used to cross-check the sparse paths.

#pragma once

#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "nacgof/ac.hpp"
#include "nacgof/baselines.hpp"
#include "nacgof/graph.hpp"
#include "nacgof/rng.hpp"

namespace nacgof::oracle {

inline Eigen::MatrixXd dense(const SparseGraph& g) {
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(g.n(), g.n());
  for (NodeId i = 0; i < g.n(); ++i)
    for (NodeId j = 0; j < g.n(); ++j) A(i, j) = g.at(i, j);
  return A;
}

/// Random symmetric multigraph with zero diagonal and Poisson(mean) entries.
inline SparseGraph random_graph(int n, double mean, Rng& rng) {
  std::poisson_distribution<int> pois(mean);
  std::vector<Edge> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (int w = pois(rng); w > 0) edges.push_back({i, j, w});
  return SparseGraph::from_edges(n, edges);
}

inline std::vector<int> random_labels(int n, int K, Rng& rng) {
  std::uniform_int_distribution<int> u(0, K - 1);
  std::vector<int> z(n);
  for (int i = 0; i < n; ++i) z[i] = i < K ? i : u(rng);  // every label used
  std::shuffle(z.begin(), z.end(), rng);
  return z;
}

/// X_il = sum_{c : labels[c] = l} A(rows[r], cols[c]) by double loop.
inline Eigen::MatrixXd compress(const Eigen::MatrixXd& A, const std::vector<NodeId>& rows,
                                const std::vector<NodeId>& cols, const std::vector<int>& labels, int L) {
  Eigen::MatrixXd X = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(rows.size()), L);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < cols.size(); ++c) X(r, labels[c]) += A(rows[r], cols[c]);
  return X;
}

/// Pooled chi-square by triple loop; rows with zero total skipped.
inline double chi_square(const Eigen::MatrixXd& X, const std::vector<int>& groups, int K) {
  const auto m = X.rows();
  const auto L = X.cols();
  Eigen::MatrixXd num = Eigen::MatrixXd::Zero(K, L);
  Eigen::VectorXd den = Eigen::VectorXd::Zero(K);
  for (Eigen::Index i = 0; i < m; ++i)
    for (Eigen::Index l = 0; l < L; ++l) {
      num(groups[i], l) += X(i, l);
      den(groups[i]) += X(i, l);
    }
  double y = 0;
  for (Eigen::Index i = 0; i < m; ++i) {
    const double d = X.row(i).sum();
    if (d == 0) continue;
    for (Eigen::Index l = 0; l < L; ++l) {
      const double e = d * num(groups[i], l) / den(groups[i]);
      if (e == 0) continue;
      y += (X(i, l) - e) * (X(i, l) - e) / e;
    }
  }
  return y;
}

inline double loglik(const Eigen::MatrixXd& A, const BlockEstimates& est, const std::vector<int>& z) {
  const auto n = A.rows();
  double l = 0;
  for (Eigen::Index i = 0; i < n; ++i) l += std::log(est.pi_hat[z[i]]);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double lam = est.theta_hat[i] * est.theta_hat[j] * est.B_hat(z[i], z[j]);
      if (A(i, j) > 0) l += A(i, j) * std::log(lam);
      l -= lam;
    }
  return l;
}

inline Eigen::MatrixXd adjusted_residual(const Eigen::MatrixXd& A, const BlockEstimates& est,
                                         const std::vector<int>& z, bool sbm) {
  const auto n = A.rows();
  Eigen::MatrixXd R = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) {
      if (i == j) continue;
      const double t = sbm ? 1.0 : est.theta_hat[i] * est.theta_hat[j];
      const double P = t * est.B_hat(z[i], z[j]);
      R(i, j) = P > 0 ? (A(i, j) - P) / std::sqrt(static_cast<double>(n) * P) : 0.0;
    }
  return R;
}

}  // namespace nacgof::oracle
