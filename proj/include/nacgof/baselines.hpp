/*
 * SPDX-FileCopyrightText: Copyright (c) 2026, nacgof contributors.
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "nacgof/graph.hpp"
#include "nacgof/nac.hpp"
#include "nacgof/spectral.hpp"

namespace nacgof {

/// Plug-in DCSBM estimates from hard labels:
///   N_kl = block sums of A, m_kl = n_k (n_l - [k == l]), B_kl = N_kl / m_kl,
///   theta_i = n_{z_i} d_i / sum_{j : z_j = z_i} d_j,  pi_k = n_k / n.
struct BlockEstimates {
  Eigen::MatrixXd B_hat;
  Eigen::MatrixXd N;
  Eigen::MatrixXd m;
  std::vector<double> theta_hat;
  std::vector<double> pi_hat;
  std::vector<bool> degenerate;  // communities with zero total degree (theta set to 1)
};

BlockEstimates fit_block_estimates(const SparseGraph& g, std::span<const int> zhat, int K);

/// sum_i log pi_{z_i} + sum_{i<j} [A_ij log lambda_ij - lambda_ij] with
/// lambda_ij = theta_i theta_j B_{z_i z_j}. The sum of lambda over pairs is formed from
/// community sums; the log term runs over edges only (0 log 0 = 0).
double dcsbm_loglik(const SparseGraph& g, const BlockEstimates& est, std::span<const int> zhat);

/// K (K + 1) log(n) / 2.
double bic_penalty(int K, NodeId n);

/// Log-likelihood of the K-community fit minus the BIC penalty.
double bic_score(LabelCache& labels, int K);
/// loglik(K + 1 fit) - loglik(K fit).
double lr_statistic(LabelCache& labels, int K);

/// Log-likelihood of the K-community fit on the cached labels.
double fitted_loglik(LabelCache& labels, int K);

enum class AsVariant { DCSBM, SBM };

/// A~ = (A - P) / sqrt(n P) with P_ij = theta_i theta_j B_{z_i z_j} [i != j] and A~_ii = 0,
/// applied as sparse part + diag * low-rank * diag + diagonal correction.
class AdjustedResidual {
 public:
  AdjustedResidual(const SparseGraph& g, const BlockEstimates& est, std::span<const int> zhat,
                   AsVariant variant);
  void apply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const;
  Eigen::MatrixXd dense() const;

 private:
  const SparseGraph* g_;
  std::vector<int> z_;
  Eigen::VectorXd theta_;      // theta (ones under SBM)
  Eigen::MatrixXd B_;
  Eigen::MatrixXd sqrtB_;
  std::vector<double> edge_scale_;  // 1 / sqrt(n P_ij) aligned with the CSR entries
  double inv_sqrt_n_;
};

/// Largest singular value of A~ (largest-magnitude eigenvalue, A~ being symmetric).
/// statistic = n^{2/3} (sigma_1 - 2); metadata carries sigma_1. No p-value.
TestOutcome as_statistic(LabelCache& labels, int K, AsVariant variant,
                         const EigenSolverOptions& eig = {});

}  // namespace nacgof
