/*
 * SPDX-FileCopyrightText: Copyright (c) 2026, nacgof contributors.
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "nacgof/graph.hpp"
#include "nacgof/rng.hpp"

namespace nacgof {

// ---------------------------------------------------------------------------
// Symmetric eigensolver
// ---------------------------------------------------------------------------

enum class EigenTarget { LargestAlgebraic, LargestMagnitude };

struct EigenSolverOptions {
  double tol = 1e-8;            // residual tolerance, relative to max(1, |largest Ritz value|)
  int max_iters = 5000;         // operator applications
  NodeId dense_threshold = 300; // n at or below this uses a dense eigendecomposition
  int krylov_dim = 0;           // 0 picks max(2k + 30, 60), capped at n
  EigenTarget target = EigenTarget::LargestMagnitude;
};

struct EigenResult {
  Eigen::MatrixXd vectors;   // n x k, orthonormal columns
  Eigen::VectorXd values;    // length k, sorted descending
  Eigen::VectorXd residuals; // ||A v - lambda v|| per pair
  int iterations = 0;        // operator applications
  bool dense = false;
};

/// y = A x for a symmetric operator of size n.
using SymmetricOperator = std::function<void(const Eigen::VectorXd& x, Eigen::VectorXd& y)>;

/// Top-k eigenpairs of a symmetric operator. Thick-restart Krylov iteration with full
/// reorthogonalization and Rayleigh-Ritz on the projected matrix; throws NumericalError
/// carrying the residual norms when max_iters is exhausted.
EigenResult symmetric_eigs(NodeId n, int k, const SymmetricOperator& op,
                           const EigenSolverOptions& opts = {});

// ---------------------------------------------------------------------------
// Spectral embedding
// ---------------------------------------------------------------------------

struct SpectralEmbedding {
  Eigen::MatrixXd vectors;
  Eigen::VectorXd eigenvalues;
  double tau = 0;
  int solver_iters = 0;
};

/// Operator D^{-1/2} A_tau D^{-1/2} with A_tau = A + (tau * dbar / n) 11^T and
/// D = diag(row sums of A_tau). The rank-one part is applied implicitly.
class RegularizedLaplacian {
 public:
  RegularizedLaplacian(const SparseGraph& g, double tau);
  void apply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const;
  /// Dense n x n materialization, for tests.
  Eigen::MatrixXd dense() const;
  const Eigen::VectorXd& regularized_degrees() const { return deg_; }

 private:
  const SparseGraph* g_;
  double shift_;
  Eigen::VectorXd deg_;
  Eigen::VectorXd inv_sqrt_;
};

SpectralEmbedding spectral_embed(const SparseGraph& g, int K, double tau,
                                 const EigenSolverOptions& opts = {});

// ---------------------------------------------------------------------------
// k-means and clustering
// ---------------------------------------------------------------------------

/// Community labels in [0, K) over a node subset (node_index[i] is the graph node of row i).
struct LabelVector {
  std::vector<int> labels;
  int K = 0;             // communities actually present
  int requested_K = 0;   // K asked of the clusterer
  std::vector<NodeId> node_index;
};

struct KmeansResult {
  std::vector<int> labels;
  Eigen::MatrixXd centroids;      // K x dim
  double objective = 0;           // within-cluster sum of squares
  std::vector<double> trace;      // objective after every Lloyd step of the winning run
  int iterations = 0;
};

/// Lloyd iterations from k-means++ seeds; best of `restarts` runs. A cluster that empties
/// is reseeded at the point farthest from its centroid.
KmeansResult kmeans(const Eigen::MatrixXd& points, int K, int restarts, Rng& rng,
                    int max_iters = 100, double rel_tol = 1e-8);

struct ClusterOptions {
  double tau = 0.25;
  double min_frac = 0.1;
  int restarts = 20;
  bool spherical = false;  // normalize embedding rows to unit length before k-means
  EigenSolverOptions eig;
};

/// Regularized spectral clustering with small-community dissolution: communities smaller
/// than min_frac * n / K are dissolved into the nearest surviving centroid and labels are
/// compacted to [0, K').
LabelVector cluster(const SparseGraph& g, int K, const ClusterOptions& opts, Rng& rng);

/// Full-graph labels memoized per K (seeded by derive_seed(seed, K)), plus unmemoized
/// fits on induced subgraphs. Thread-safe.
class LabelCache {
 public:
  LabelCache(const SparseGraph& g, ClusterOptions opts, std::uint64_t seed);

  const LabelVector& labels(int K);
  LabelVector fit_subgraph(std::span<const NodeId> nodes, int K, std::uint64_t seed) const;

  const SparseGraph& graph() const { return *g_; }
  const ClusterOptions& options() const { return opts_; }
  std::uint64_t seed() const { return seed_; }

 private:
  const SparseGraph* g_;
  ClusterOptions opts_;
  std::uint64_t seed_;
  std::mutex mu_;
  std::map<int, std::unique_ptr<LabelVector>> cache_;
};

/// Fraction of nodes on which two labelings agree under the best label permutation
/// (Hungarian-free: exhaustive for K <= 8, greedy otherwise).
double best_permutation_agreement(std::span<const int> a, std::span<const int> b);

}  // namespace nacgof
