/*
 * SPDX-FileCopyrightText: Copyright (c) 2026, nacgof contributors.
 * SPDX-License-Identifier: Apache-2.0
 */

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "nacgof/baselines.hpp"
#include "nacgof/error.hpp"
#include "nacgof/sbm.hpp"
#include "oracles.hpp"
#include "sim.hpp"

using namespace nacgof;

namespace {

SparseGraph hand_graph() {
  std::vector<Edge> e = {{0, 1}, {2, 3}, {0, 2}};
  return SparseGraph::from_edges(4, e);
}

SparseGraph cycle(int n) {
  std::vector<Edge> e;
  for (int i = 0; i < n; ++i) e.push_back({i, (i + 1) % n});
  return SparseGraph::from_edges(n, e);
}

}  // namespace

TEST(BlockEstimates, HandExample) {
  std::vector<int> z = {0, 0, 1, 1};
  auto est = fit_block_estimates(hand_graph(), z, 2);
  EXPECT_DOUBLE_EQ(est.B_hat(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(est.B_hat(1, 1), 1.0);
  EXPECT_DOUBLE_EQ(est.B_hat(0, 1), 0.25);
  EXPECT_DOUBLE_EQ(est.B_hat(1, 0), 0.25);
  const std::vector<double> theta = {4.0 / 3, 2.0 / 3, 4.0 / 3, 2.0 / 3};
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(est.theta_hat[i], theta[i], 1e-15);
  EXPECT_DOUBLE_EQ(est.pi_hat[0], 0.5);
}

TEST(BlockEstimates, RegularGraphHasUnitTheta) {
  std::vector<int> z(12, 0);
  auto est = fit_block_estimates(cycle(12), z, 1);
  for (double t : est.theta_hat) EXPECT_DOUBLE_EQ(t, 1.0);
}

TEST(BlockEstimates, ThetaSumsAndSymmetry) {
  Rng rng = make_rng(1);
  for (int rep = 0; rep < 20; ++rep) {
    const int n = 60 + rep, K = 1 + rep % 4;
    SparseGraph g = oracle::random_graph(n, 0.1, rng);
    auto z = oracle::random_labels(n, K, rng);
    auto est = fit_block_estimates(g, z, K);
    std::vector<double> sum(K, 0.0), size(K, 0.0);
    for (int i = 0; i < n; ++i) {
      sum[z[i]] += est.theta_hat[i];
      size[z[i]] += 1;
    }
    for (int k = 0; k < K; ++k)
      if (!est.degenerate[k]) EXPECT_NEAR(sum[k], size[k], 1e-10);
    EXPECT_EQ(est.B_hat, est.B_hat.transpose());
    EXPECT_NEAR(std::accumulate(est.pi_hat.begin(), est.pi_hat.end(), 0.0), 1.0, 1e-15);
  }
}

TEST(BlockEstimates, ZeroDegreeCommunityFlagged) {
  std::vector<Edge> e = {{0, 1}};
  SparseGraph g = SparseGraph::from_edges(4, e);
  std::vector<int> z = {0, 0, 1, 1};
  auto est = fit_block_estimates(g, z, 2);
  EXPECT_TRUE(est.degenerate[1]);
  EXPECT_EQ(est.theta_hat[2], 1.0);
  EXPECT_EQ(est.theta_hat[3], 1.0);
}

TEST(Loglik, MatchesDenseOracle) {
  Rng rng = make_rng(2);
  for (int rep = 0; rep < 25; ++rep) {
    const int n = 40 + 6 * rep, K = 1 + rep % 5;
    SparseGraph g = oracle::random_graph(n, 0.12, rng);
    auto z = oracle::random_labels(n, K, rng);
    auto est = fit_block_estimates(g, z, K);
    const double expect = oracle::loglik(oracle::dense(g), est, z);
    EXPECT_NEAR(dcsbm_loglik(g, est, z), expect, 1e-8 * std::max(1.0, std::abs(expect)));
  }
}

TEST(Loglik, EmptyGraphIsZero) {
  SparseGraph g = SparseGraph::from_edges(7, {});
  std::vector<int> z(7, 0);
  EXPECT_EQ(dcsbm_loglik(g, fit_block_estimates(g, z, 1), z), 0.0);
}

TEST(Loglik, PriorTermForBalancedSplit) {
  SparseGraph g = SparseGraph::from_edges(100, {});
  std::vector<int> z(100);
  for (int i = 0; i < 100; ++i) z[i] = i % 2;
  EXPECT_NEAR(dcsbm_loglik(g, fit_block_estimates(g, z, 2), z), 100 * std::log(0.5), 1e-10);
}

TEST(Bic, PenaltyArithmetic) {
  EXPECT_NEAR(bic_penalty(2, 100), 3 * std::log(100.0), 1e-12);
  EXPECT_NEAR(bic_penalty(2, 100), 13.8155, 1e-4);
}

TEST(Bic, ScoreIsLoglikMinusPenalty) {
  Simulated sim = simulate(testing_models::dcsbm(400, 3, 0.2, 15), 3);
  LabelCache cache(sim.graph, {}, 4);
  for (int K = 1; K <= 4; ++K)
    EXPECT_EQ(bic_score(cache, K), fitted_loglik(cache, K) - bic_penalty(K, 400));
}

TEST(Lr, DeterministicAndDifference) {
  Simulated sim = simulate(testing_models::dcsbm(400, 3, 0.2, 15), 5);
  LabelCache a(sim.graph, {}, 6), b(sim.graph, {}, 6);
  EXPECT_EQ(lr_statistic(a, 2), lr_statistic(b, 2));
  EXPECT_EQ(lr_statistic(a, 2), fitted_loglik(a, 3) - fitted_loglik(a, 2));
}

TEST(Bic, SelectsTrueK) {
  int hits = 0;
  const int reps = 50;
  for (int rep = 0; rep < reps; ++rep) {
    ModelSpec m = testing_models::dcsbm(2000, 4, 0.2, 40, false);
    Simulated sim = simulate(m, 4000 + rep);
    LabelCache cache(sim.graph, {}, rep);
    int best = 1;
    double best_score = -INFINITY;
    for (int K = 1; K <= 8; ++K) {
      const double s = bic_score(cache, K);
      if (s > best_score) {
        best_score = s;
        best = K;
      }
    }
    hits += best == 4;
  }
  EXPECT_GE(hits, 45);
}

TEST(AdjustedSpectral, MatvecMatchesDense) {
  Rng rng = make_rng(7);
  for (int rep = 0; rep < 10; ++rep) {
    const int n = 50 + 25 * rep, K = 1 + rep % 4;
    SparseGraph g = oracle::random_graph(n, 0.1, rng);
    auto z = oracle::random_labels(n, K, rng);
    auto est = fit_block_estimates(g, z, K);
    for (AsVariant v : {AsVariant::DCSBM, AsVariant::SBM}) {
      AdjustedResidual op(g, est, z, v);
      Eigen::MatrixXd R = oracle::adjusted_residual(oracle::dense(g), est, z, v == AsVariant::SBM);
      EXPECT_LT((op.dense() - R).cwiseAbs().maxCoeff(), 1e-8);
      Eigen::VectorXd x = Eigen::VectorXd::Random(n), y;
      op.apply(x, y);
      EXPECT_LT((R * x - y).cwiseAbs().maxCoeff(), 1e-8);
    }
  }
}

TEST(AdjustedSpectral, RelabelingInvariant) {
  Rng rng = make_rng(8);
  SparseGraph g = oracle::random_graph(150, 0.08, rng);
  auto z = oracle::random_labels(150, 3, rng);
  std::vector<int> perm = {2, 0, 1}, z2 = z;
  for (auto& v : z2) v = perm[v];
  auto top = [&](const std::vector<int>& lab) {
    AdjustedResidual op(g, fit_block_estimates(g, lab, 3), lab, AsVariant::DCSBM);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(op.dense());
    return es.eigenvalues().cwiseAbs().maxCoeff();
  };
  EXPECT_NEAR(top(z), top(z2), 1e-10);
}

TEST(AdjustedSpectral, EdgeOfSpectrumUnderNull) {
  for (std::uint64_t rep = 0; rep < 20; ++rep) {
    Rng rng = make_rng(900 + rep);
    DcsbmParams p;
    p.K = 1;
    p.B = Eigen::MatrixXd::Constant(1, 1, 0.05);
    p.z.assign(2000, 0);
    p.theta.assign(2000, 1.0);
    SparseGraph g = sample_dcsbm(p, rng);
    LabelCache cache(g, {}, rep);
    TestOutcome t = as_statistic(cache, 1, AsVariant::SBM);
    const double sigma1 = t.metadata["sigma1"].get<double>();
    EXPECT_GE(sigma1, 1.8) << "rep " << rep;
    EXPECT_LE(sigma1, 2.3) << "rep " << rep;
    EXPECT_FALSE(t.p_value.has_value());
  }
}

TEST(AdjustedSpectral, ZeroVarianceAtEdgeRejected) {
  SparseGraph g = hand_graph();
  std::vector<int> z = {0, 0, 1, 1};
  auto est = fit_block_estimates(g, z, 2);
  est.B_hat(0, 1) = est.B_hat(1, 0) = 0.0;
  try {
    AdjustedResidual op(g, est, z, AsVariant::SBM);
    FAIL();
  } catch (const NumericalError& e) {
    EXPECT_NE(std::string(e.what()).find("variance degenerate at edge"), std::string::npos);
  }
}
