/*
 * SPDX-FileCopyrightText: Copyright (c) 2026, nacgof contributors.
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "nacgof/graph.hpp"
#include "nacgof/rng.hpp"

namespace nacgof {

enum class EdgeDist { Poisson, Bernoulli };

enum class ConnectivityKind { B1, B2, B3 };

struct ConnectivityParams {
  double beta = 0.2;       // out-in ratio (B1, B3)
  double gamma = 0.3;      // permutation weight (B2)
  std::vector<double> w;   // diagonal weights (B3)
};

/// Un-normalized connectivity matrices:
///   B1 = (1-beta) I + beta 11^T
///   B2 = gamma R + (1-gamma) Q, R a random symmetric permutation, Q symmetric Unif(0,1)
///   B3 = (1-beta) diag(w) + beta 11^T
/// Only B2 consumes randomness.
Eigen::MatrixXd make_connectivity(ConnectivityKind kind, int K, const ConnectivityParams& params,
                                  Rng& rng);

/// (1/n) sum_{i != j} theta_i theta_j B_{z_i z_j}, evaluated from per-community sums.
double expected_average_degree(const Eigen::MatrixXd& B, std::span<const int> z,
                               std::span<const double> theta);

/// Returns c * B0 with c chosen so that expected_average_degree(c * B0, z, theta) == lambda.
Eigen::MatrixXd scale_to_expected_degree(const Eigen::MatrixXd& B0, std::span<const int> z,
                                         std::span<const double> theta, double lambda);

/// i.i.d. labels in [0, K) with P(z = k) proportional to prior[k]. Resamples (up to 16 times)
/// when some community ends up empty.
std::vector<int> sample_labels(int n, std::span<const double> prior, Rng& rng);

/// i.i.d. Pareto(x0, alpha) draws via the inverse CDF x0 * U^{-1/alpha}.
std::vector<double> sample_pareto_theta(int n, double x0, double alpha, Rng& rng);

struct DcsbmParams {
  int K = 1;
  Eigen::MatrixXd B;          // K x K symmetric, nonnegative
  std::vector<int> z;         // labels in [0, K)
  std::vector<double> theta;  // positive propensities
  EdgeDist dist = EdgeDist::Poisson;

  void validate() const;
};

struct SamplerStats {
  std::size_t clipped_pairs = 0;  // Bernoulli pairs whose mean exceeded 1
  std::size_t dense_blocks = 0;   // community pairs sampled pair-by-pair
};

/// A_ij, i < j, independently Poisson(theta_i theta_j B_{z_i z_j}) or
/// Bernoulli(min(theta_i theta_j B_{z_i z_j}, 1)). Expected cost O(n + K^2 + edges):
/// each community pair is Poissonized (total count, then endpoints drawn proportional to
/// theta). Bernoulli blocks thin Poisson proposals; blocks whose largest mean exceeds 1/2
/// fall back to pair-by-pair sampling.
SparseGraph sample_dcsbm(const DcsbmParams& params, Rng& rng, SamplerStats* stats = nullptr);

/// Pair-by-pair O(n^2) reference sampler for the same law.
SparseGraph sample_dcsbm_dense(const DcsbmParams& params, Rng& rng);

struct DclvmParams {
  int K = 1;                  // number of mixture components; also the latent dimension
  std::vector<int> z;         // labels in [0, K)
  std::vector<double> theta;  // positive propensities
  int latent_dim() const { return K; }
};

struct DclvmSample {
  SparseGraph graph;
  double scale = 0;            // calibration constant c
  double clip_fraction = 0;    // share of pairs with c * kernel > 1
  bool clip_warning = false;   // clip_fraction > 10%
  Eigen::MatrixXd latent;      // n x K latent positions
};

/// Latent x_i = 2 e_{z_i} + w_i with w_i ~ N(0, I_K); p_ij = min(c theta_i theta_j
/// exp(-|x_i - x_j|^2), 1), c = lambda n / (2 sum_{i<j} theta_i theta_j exp(-|x_i - x_j|^2))
/// computed on this realization. O(n^2 K).
DclvmSample sample_dclvm(const DclvmParams& params, double lambda, Rng& rng);

}  // namespace nacgof
