/*
 * SPDX-FileCopyrightText: Copyright (c) 2026, nacgof contributors.
 * SPDX-License-Identifier: Apache-2.0
 */

#include "nacgof/baselines.hpp"

#include <cmath>

#include "nacgof/error.hpp"

namespace nacgof {

BlockEstimates fit_block_estimates(const SparseGraph& g, std::span<const int> zhat, int K) {
  const NodeId n = g.n();
  if (zhat.size() != static_cast<std::size_t>(n)) throw ValidationError("zhat must cover all nodes");
  if (K < 1) throw ValidationError("K must be >= 1");
  BlockEstimates est;
  est.N = Eigen::MatrixXd::Zero(K, K);
  est.m = Eigen::MatrixXd::Zero(K, K);
  est.B_hat = Eigen::MatrixXd::Zero(K, K);
  std::vector<double> nk(static_cast<std::size_t>(K), 0.0), dk(nk);
  auto d = g.degrees();
  for (NodeId i = 0; i < n; ++i) {
    const int k = zhat[i];
    if (k < 0 || k >= K) throw ValidationError("label out of range");
    nk[k] += 1.0;
    dk[k] += static_cast<double>(d[i]);
    auto nb = g.neighbors(i);
    auto w = g.weights(i);
    for (std::size_t p = 0; p < nb.size(); ++p) est.N(k, zhat[nb[p]]) += w[p];
  }
  for (int k = 0; k < K; ++k)
    for (int l = 0; l < K; ++l) {
      est.m(k, l) = nk[k] * (nk[l] - (k == l ? 1.0 : 0.0));
      est.B_hat(k, l) = est.m(k, l) > 0.0 ? est.N(k, l) / est.m(k, l) : 0.0;
    }
  est.degenerate.assign(static_cast<std::size_t>(K), false);
  for (int k = 0; k < K; ++k) est.degenerate[k] = !(dk[k] > 0.0);
  est.theta_hat.resize(static_cast<std::size_t>(n));
  for (NodeId i = 0; i < n; ++i) {
    const int k = zhat[i];
    est.theta_hat[i] = est.degenerate[k] ? 1.0 : nk[k] * static_cast<double>(d[i]) / dk[k];
  }
  est.pi_hat.resize(static_cast<std::size_t>(K));
  for (int k = 0; k < K; ++k) est.pi_hat[k] = nk[k] / static_cast<double>(n);
  return est;
}

double dcsbm_loglik(const SparseGraph& g, const BlockEstimates& est, std::span<const int> zhat) {
  const NodeId n = g.n();
  const auto K = static_cast<int>(est.B_hat.rows());
  double prior = 0.0;
  Eigen::VectorXd S = Eigen::VectorXd::Zero(K);
  double self = 0.0;
  for (NodeId i = 0; i < n; ++i) {
    const int k = zhat[i];
    prior += std::log(est.pi_hat[k]);
    S(k) += est.theta_hat[i];
    self += est.theta_hat[i] * est.theta_hat[i] * est.B_hat(k, k);
  }
  const double mean_sum = 0.5 * (S.dot(est.B_hat * S) - self);

  double edge_term = 0.0;
  for (NodeId i = 0; i < n; ++i) {
    auto nb = g.neighbors(i);
    auto w = g.weights(i);
    for (std::size_t p = 0; p < nb.size(); ++p) {
      const NodeId j = nb[p];
      if (j <= i) continue;
      const double lam = est.theta_hat[i] * est.theta_hat[j] * est.B_hat(zhat[i], zhat[j]);
      if (!(lam > 0.0)) throw NumericalError("inconsistent estimates: edge with zero fitted mean");
      edge_term += w[p] * std::log(lam);
    }
  }
  return prior + edge_term - mean_sum;
}

double bic_penalty(int K, NodeId n) { return K * (K + 1.0) * std::log(static_cast<double>(n)) / 2.0; }

double fitted_loglik(LabelCache& labels, int K) {
  const LabelVector& z = labels.labels(K);
  auto est = fit_block_estimates(labels.graph(), z.labels, z.K);
  return dcsbm_loglik(labels.graph(), est, z.labels);
}

double bic_score(LabelCache& labels, int K) {
  return fitted_loglik(labels, K) - bic_penalty(K, labels.graph().n());
}

double lr_statistic(LabelCache& labels, int K) {
  return fitted_loglik(labels, K + 1) - fitted_loglik(labels, K);
}

AdjustedResidual::AdjustedResidual(const SparseGraph& g, const BlockEstimates& est,
                                   std::span<const int> zhat, AsVariant variant)
    : g_(&g), z_(zhat.begin(), zhat.end()), B_(est.B_hat) {
  const NodeId n = g.n();
  theta_.resize(n);
  for (NodeId i = 0; i < n; ++i) theta_(i) = variant == AsVariant::SBM ? 1.0 : est.theta_hat[i];
  sqrtB_ = B_.cwiseSqrt();
  inv_sqrt_n_ = 1.0 / std::sqrt(static_cast<double>(n));
  edge_scale_.resize(static_cast<std::size_t>(g.nnz()));
  const auto& rp = g.row_ptr();
  const auto& ci = g.col_index();
  for (NodeId i = 0; i < n; ++i) {
    for (std::int64_t p = rp[i]; p < rp[i + 1]; ++p) {
      const NodeId j = ci[p];
      const double P = theta_(i) * theta_(j) * B_(z_[i], z_[j]);
      if (!(P > 0.0)) throw NumericalError("variance degenerate at edge");
      edge_scale_[p] = 1.0 / std::sqrt(n * P);
    }
  }
}

void AdjustedResidual::apply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const {
  const NodeId n = g_->n();
  const auto K = static_cast<int>(B_.rows());
  const auto& rp = g_->row_ptr();
  const auto& ci = g_->col_index();
  const auto& va = g_->values();
  // Low-rank part: -(1/sqrt n) u_i sum_j sqrtB_{z_i z_j} u_j x_j, u = sqrt(theta).
  Eigen::VectorXd u = theta_.cwiseSqrt();
  Eigen::VectorXd comm = Eigen::VectorXd::Zero(K);
  for (NodeId j = 0; j < n; ++j) comm(z_[j]) += u(j) * x(j);
  Eigen::VectorXd mixed = sqrtB_ * comm;
  y.resize(n);
  for (NodeId i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::int64_t p = rp[i]; p < rp[i + 1]; ++p) s += va[p] * edge_scale_[p] * x(ci[p]);
    // The low-rank term includes j = i; A~_ii = 0 so add it back.
    s -= inv_sqrt_n_ * u(i) * (mixed(z_[i]) - sqrtB_(z_[i], z_[i]) * u(i) * x(i));
    y(i) = s;
  }
}

Eigen::MatrixXd AdjustedResidual::dense() const {
  const NodeId n = g_->n();
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
  for (NodeId i = 0; i < n; ++i)
    for (NodeId j = 0; j < n; ++j) {
      if (i == j) continue;
      const double P = theta_(i) * theta_(j) * B_(z_[i], z_[j]);
      const double a = g_->at(i, j);
      if (P > 0.0) M(i, j) = (a - P) / std::sqrt(n * P);
    }
  return M;
}

TestOutcome as_statistic(LabelCache& labels, int K, AsVariant variant, const EigenSolverOptions& eig) {
  const SparseGraph& g = labels.graph();
  const LabelVector& z = labels.labels(K);
  auto est = fit_block_estimates(g, z.labels, z.K);
  AdjustedResidual op(g, est, z.labels, variant);
  EigenSolverOptions o = eig;
  o.target = EigenTarget::LargestMagnitude;
  auto res = symmetric_eigs(
      g.n(), 1, [&](const Eigen::VectorXd& x, Eigen::VectorXd& y) { op.apply(x, y); }, o);
  const double sigma1 = std::abs(res.values(0));
  TestOutcome out;
  out.method = variant == AsVariant::SBM ? Method::ASSBM : Method::AS;
  out.K = K;
  out.L = z.K;
  out.statistic = std::pow(static_cast<double>(g.n()), 2.0 / 3.0) * (sigma1 - 2.0);
  out.seed = labels.seed();
  out.metadata["sigma1"] = sigma1;
  out.metadata["solver_iters"] = res.iterations;
  return out;
}

}  // namespace nacgof
