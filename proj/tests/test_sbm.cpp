/*
 * SPDX-FileCopyrightText: Copyright (c) 2026, nacgof contributors.
 * SPDX-License-Identifier: Apache-2.0
 */

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <numeric>

#include <boost/math/distributions/chi_squared.hpp>

#include "nacgof/error.hpp"
#include "nacgof/sbm.hpp"

using namespace nacgof;

namespace {

bool same_graph(const SparseGraph& a, const SparseGraph& b) {
  return a.n() == b.n() && a.row_ptr() == b.row_ptr() && a.col_index() == b.col_index() &&
         a.values() == b.values();
}

// Pearson two-sample homogeneity p-value for count histograms.
double homogeneity_p(const std::map<int, int>& a, const std::map<int, int>& b) {
  std::map<int, std::pair<double, double>> cells;
  double na = 0, nb = 0;
  for (auto [k, c] : a) cells[k].first += c, na += c;
  for (auto [k, c] : b) cells[k].second += c, nb += c;
  // pool sparse tail cells so every expected count is at least 5
  std::vector<std::pair<double, double>> pooled;
  std::pair<double, double> acc{0, 0};
  for (auto& [k, v] : cells) {
    acc.first += v.first;
    acc.second += v.second;
    if ((acc.first + acc.second) * std::min(na, nb) / (na + nb) >= 5) {
      pooled.push_back(acc);
      acc = {0, 0};
    }
  }
  if (acc.first + acc.second > 0) {
    if (pooled.empty()) pooled.push_back(acc);
    else pooled.back().first += acc.first, pooled.back().second += acc.second;
  }
  if (pooled.size() < 2) return 1.0;
  double stat = 0;
  for (auto [x, y] : pooled) {
    const double tot = x + y;
    const double ex = tot * na / (na + nb), ey = tot * nb / (na + nb);
    stat += (x - ex) * (x - ex) / ex + (y - ey) * (y - ey) / ey;
  }
  boost::math::chi_squared dist(static_cast<double>(pooled.size() - 1));
  return boost::math::cdf(boost::math::complement(dist, stat));
}

}  // namespace

TEST(Connectivity, PlantedPartition) {
  Rng rng = make_rng(1);
  Eigen::MatrixXd B = make_connectivity(ConnectivityKind::B1, 2, {.beta = 0.2}, rng);
  EXPECT_DOUBLE_EQ(B(0, 0), 1.0);
  EXPECT_DOUBLE_EQ(B(1, 1), 1.0);
  EXPECT_DOUBLE_EQ(B(0, 1), 0.2);
  EXPECT_DOUBLE_EQ(B(1, 0), 0.2);
}

TEST(Connectivity, WeightedReducesToPlanted) {
  Rng rng = make_rng(1);
  ConnectivityParams p{.beta = 0.3, .w = std::vector<double>(5, 1.0)};
  Eigen::MatrixXd b1 = make_connectivity(ConnectivityKind::B1, 5, p, rng);
  Eigen::MatrixXd b3 = make_connectivity(ConnectivityKind::B3, 5, p, rng);
  EXPECT_EQ(b1, b3);
}

TEST(Connectivity, PermutationLimit) {
  for (std::uint64_t s = 0; s < 10; ++s) {
    Rng rng = make_rng(s);
    Eigen::MatrixXd B = make_connectivity(ConnectivityKind::B2, 6, {.gamma = 1.0}, rng);
    EXPECT_TRUE(B.isApprox(B.transpose()));
    for (int r = 0; r < 6; ++r) {
      int nonzero = 0;
      for (int c = 0; c < 6; ++c) nonzero += B(r, c) != 0.0;
      EXPECT_EQ(nonzero, 1);
      EXPECT_DOUBLE_EQ(B.row(r).sum(), 1.0);
    }
  }
}

TEST(Connectivity, MixtureIsSymmetricAndPositive) {
  Rng rng = make_rng(2);
  Eigen::MatrixXd B = make_connectivity(ConnectivityKind::B2, 7, {.gamma = 0.3}, rng);
  EXPECT_EQ(B, B.transpose());
  EXPECT_GT(B.minCoeff(), 0.0);
}

TEST(Connectivity, RejectsBadParameters) {
  Rng rng = make_rng(1);
  EXPECT_THROW(make_connectivity(ConnectivityKind::B1, 0, {}, rng), ValidationError);
  EXPECT_THROW(make_connectivity(ConnectivityKind::B1, 3, {.beta = 1.5}, rng), ValidationError);
  EXPECT_THROW(make_connectivity(ConnectivityKind::B1, 3, {.beta = 0.0}, rng), ValidationError);
  EXPECT_THROW(make_connectivity(ConnectivityKind::B3, 3, {.beta = 0.2, .w = {1, 2}}, rng), ValidationError);
}

TEST(Scaling, HitsTargetDegree) {
  Rng rng = make_rng(3);
  auto z = sample_labels(500, std::vector<double>{1, 2, 3}, rng);
  auto theta = sample_pareto_theta(500, 0.75, 4, rng);
  Eigen::MatrixXd B0 = make_connectivity(ConnectivityKind::B1, 3, {.beta = 0.2}, rng);
  Eigen::MatrixXd B = scale_to_expected_degree(B0, z, theta, 17.5);
  EXPECT_NEAR(expected_average_degree(B, z, theta), 17.5, 1e-12);
}

TEST(Scaling, SingleCommunityConstant) {
  std::vector<int> z(100, 0);
  std::vector<double> theta(100, 1.0);
  Eigen::MatrixXd B = scale_to_expected_degree(Eigen::MatrixXd::Ones(1, 1), z, theta, 10.0);
  EXPECT_NEAR(B(0, 0), 10.0 / 99.0, 1e-15);
}

TEST(Scaling, QuadraticInTheta) {
  Rng rng = make_rng(4);
  auto z = sample_labels(200, std::vector<double>{1, 1}, rng);
  auto theta = sample_pareto_theta(200, 0.75, 4, rng);
  auto twice = theta;
  for (auto& t : twice) t *= 2;
  Eigen::MatrixXd B0 = make_connectivity(ConnectivityKind::B1, 2, {.beta = 0.2}, rng);
  const double c1 = scale_to_expected_degree(B0, z, theta, 12)(0, 0);
  const double c2 = scale_to_expected_degree(B0, z, twice, 12)(0, 0);
  EXPECT_NEAR(c2, c1 / 4, 1e-14 * c1);
}

TEST(Scaling, RejectsDegenerateTheta) {
  std::vector<int> z(10, 0);
  std::vector<double> theta(10, 1.0);
  theta[3] = 0.0;
  EXPECT_THROW(scale_to_expected_degree(Eigen::MatrixXd::Ones(1, 1), z, theta, 5), ValidationError);
}

TEST(Labels, PriorFrequencies) {
  Rng rng = make_rng(5);
  auto z = sample_labels(100000, std::vector<double>{1, 2, 3, 4}, rng);
  std::vector<double> freq(4, 0);
  for (int l : z) freq[l] += 1.0 / z.size();
  for (int k = 0; k < 4; ++k) EXPECT_NEAR(freq[k], (k + 1) / 10.0, 0.02);
}

TEST(Labels, SingleCommunity) {
  Rng rng = make_rng(6);
  for (int l : sample_labels(50, std::vector<double>{1}, rng)) EXPECT_EQ(l, 0);
}

TEST(Labels, EveryCommunityUsed) {
  Rng rng = make_rng(7);
  for (int rep = 0; rep < 50; ++rep) {
    auto z = sample_labels(12, std::vector<double>{1, 1, 1, 1}, rng);
    std::vector<int> seen(4, 0);
    for (int l : z) seen[l] = 1;
    EXPECT_EQ(std::accumulate(seen.begin(), seen.end(), 0), 4);
  }
}

TEST(Pareto, MeanIsOne) {
  Rng rng = make_rng(8);
  auto t = sample_pareto_theta(100000, 0.75, 4, rng);
  double mean = 0;
  for (double v : t) {
    ASSERT_GE(v, 0.75);
    mean += v / t.size();
  }
  EXPECT_NEAR(mean, 1.0, 0.02);
}

TEST(Dcsbm, ZeroIntensityIsEmpty) {
  Rng rng = make_rng(9);
  DcsbmParams p{2, Eigen::MatrixXd::Zero(2, 2), sample_labels(50, std::vector<double>{1, 1}, rng),
                std::vector<double>(50, 1.0)};
  EXPECT_EQ(sample_dcsbm(p, rng).edge_sum(), 0);
}

TEST(Dcsbm, PoissonEdgeTotal) {
  const int n = 400, reps = 200;
  const double lambda = 10;
  DcsbmParams p{1, Eigen::MatrixXd::Constant(1, 1, lambda / n), std::vector<int>(n, 0),
                std::vector<double>(n, 1.0)};
  Rng rng = make_rng(10);
  double sum = 0, sq = 0;
  for (int r = 0; r < reps; ++r) {
    SparseGraph g = sample_dcsbm(p, rng);
    ASSERT_TRUE(g.check_invariants());
    sum += g.edge_sum();
    sq += static_cast<double>(g.edge_sum()) * g.edge_sum();
  }
  const double mean = sum / reps;
  const double sd = std::sqrt((sq - reps * mean * mean) / (reps - 1));
  const double target = n * (n - 1.0) * lambda / (2.0 * n);
  EXPECT_LT(std::abs(mean - target), 3 * sd / std::sqrt(reps));
}

TEST(Dcsbm, SameSeedSameGraph) {
  Rng r0 = make_rng(11);
  auto z = sample_labels(300, std::vector<double>{1, 1, 1}, r0);
  auto th = sample_pareto_theta(300, 0.75, 4, r0);
  Eigen::MatrixXd B = scale_to_expected_degree(make_connectivity(ConnectivityKind::B1, 3, {}, r0), z, th, 8);
  for (EdgeDist dist : {EdgeDist::Poisson, EdgeDist::Bernoulli}) {
    DcsbmParams p{3, B, z, th, dist};
    Rng a = make_rng(12), b = make_rng(12);
    EXPECT_TRUE(same_graph(sample_dcsbm(p, a), sample_dcsbm(p, b)));
  }
}

TEST(Dcsbm, PoissonEntryMatchesDenseOracle) {
  // Three nodes, two communities; compare the law of A_01 between the fast and dense paths.
  DcsbmParams p{2, (Eigen::MatrixXd(2, 2) << 1.2, 0.4, 0.4, 0.9).finished(), {0, 0, 1},
                {1.0, 0.7, 1.3}};
  Rng fast = make_rng(13), slow = make_rng(14);
  std::map<int, int> hf, hs, hf12, hs12;
  for (int r = 0; r < 10000; ++r) {
    SparseGraph a = sample_dcsbm(p, fast);
    SparseGraph b = sample_dcsbm_dense(p, slow);
    ++hf[a.at(0, 1)];
    ++hs[b.at(0, 1)];
    ++hf12[a.at(1, 2)];
    ++hs12[b.at(1, 2)];
  }
  EXPECT_GT(homogeneity_p(hf, hs), 1e-3);
  EXPECT_GT(homogeneity_p(hf12, hs12), 1e-3);
}

TEST(Dcsbm, BernoulliPairFrequenciesMatchDenseOracle) {
  // Block 0 is sparse (thinned proposals), block 1 dense enough to use the pairwise path.
  const int n = 12;
  std::vector<int> z = {0, 0, 0, 0, 0, 0, 1, 1, 1, 1, 1, 1};
  std::vector<double> th = {1.0, 0.8, 1.2, 0.9, 1.1, 1.0, 1.0, 1.3, 0.7, 1.0, 1.2, 0.8};
  DcsbmParams p{2, (Eigen::MatrixXd(2, 2) << 0.15, 0.05, 0.05, 0.7).finished(), z, th,
                EdgeDist::Bernoulli};
  Rng fast = make_rng(15), slow = make_rng(16);
  Eigen::MatrixXd cf = Eigen::MatrixXd::Zero(n, n), cs = cf;
  const int reps = 20000;
  for (int r = 0; r < reps; ++r) {
    SparseGraph a = sample_dcsbm(p, fast), b = sample_dcsbm_dense(p, slow);
    for (NodeId i = 0; i < n; ++i)
      for (NodeId j = i + 1; j < n; ++j) {
        ASSERT_LE(a.at(i, j), 1);
        cf(i, j) += a.at(i, j);
        cs(i, j) += b.at(i, j);
      }
  }
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double pij = std::min(th[i] * th[j] * p.B(z[i], z[j]), 1.0);
      const double se = std::sqrt(pij * (1 - pij) / reps);
      EXPECT_NEAR(cf(i, j) / reps, pij, 4.5 * se + 1e-12) << i << "," << j;
      EXPECT_NEAR(cs(i, j) / reps, pij, 4.5 * se + 1e-12) << i << "," << j;
    }
}

TEST(Dcsbm, BernoulliClipsAtOne) {
  DcsbmParams p{1, Eigen::MatrixXd::Constant(1, 1, 3.0), std::vector<int>(6, 0),
                std::vector<double>(6, 1.0), EdgeDist::Bernoulli};
  Rng rng = make_rng(17);
  SamplerStats stats;
  SparseGraph g = sample_dcsbm(p, rng, &stats);
  EXPECT_EQ(g.edge_sum(), 15);
  EXPECT_EQ(stats.clipped_pairs, 15u);
}

TEST(Dcsbm, MatchedMeansGiveIdenticalGraphs) {
  // Doubling theta and quartering B leaves every pair mean unchanged, and the sampler
  // consumes randomness only through those means.
  Rng r0 = make_rng(18);
  auto z = sample_labels(200, std::vector<double>{1, 1}, r0);
  auto th = sample_pareto_theta(200, 0.75, 4, r0);
  Eigen::MatrixXd B = scale_to_expected_degree(make_connectivity(ConnectivityKind::B1, 2, {}, r0), z, th, 6);
  auto th2 = th;
  for (auto& t : th2) t *= 2;
  DcsbmParams a{2, B, z, th}, b{2, B / 4.0, z, th2};
  Rng ra = make_rng(19), rb = make_rng(19);
  EXPECT_TRUE(same_graph(sample_dcsbm(a, ra), sample_dcsbm(b, rb)));
}

TEST(Dcsbm, InvalidParamsRejected) {
  DcsbmParams p{2, (Eigen::MatrixXd(2, 2) << 1, 0.5, 0.2, 1).finished(), {0, 1}, {1, 1}};
  Rng rng = make_rng(1);
  EXPECT_THROW(sample_dcsbm(p, rng), ValidationError);  // asymmetric B
  p.B = Eigen::MatrixXd::Ones(2, 2);
  p.z = {0, 0};
  EXPECT_THROW(sample_dcsbm(p, rng), ValidationError);  // community 1 unused
}

TEST(Dclvm, AverageDegreeCalibrated) {
  const int n = 400;
  const double lambda = 12;
  Rng rng = make_rng(20);
  double avg = 0;
  for (int rep = 0; rep < 50; ++rep) {
    DclvmParams p{3, sample_labels(n, std::vector<double>{1, 1, 1}, rng), sample_pareto_theta(n, 0.75, 4, rng)};
    DclvmSample s = sample_dclvm(p, lambda, rng);
    ASSERT_TRUE(s.graph.check_invariants());
    ASSERT_GE(s.clip_fraction, 0.0);
    ASSERT_LE(s.clip_fraction, 1.0);
    ASSERT_GT(s.scale, 0.0);
    ASSERT_EQ(s.latent.rows(), n);
    ASSERT_EQ(s.latent.cols(), p.latent_dim());
    avg += 2.0 * s.graph.edge_sum() / n / 50.0;
  }
  EXPECT_NEAR(avg, lambda, 0.1 * lambda);
}

TEST(Dclvm, SimpleGraphWithinUnitProbabilities) {
  Rng rng = make_rng(21);
  DclvmParams p{2, sample_labels(100, std::vector<double>{1, 1}, rng), std::vector<double>(100, 1.0)};
  DclvmSample s = sample_dclvm(p, 80, rng);  // dense target forces clipping
  EXPECT_GT(s.clip_fraction, 0.0);
  for (NodeId i = 0; i < s.graph.n(); ++i)
    for (Weight w : s.graph.weights(i)) EXPECT_EQ(w, 1);
}

TEST(Dclvm, RejectsNonPositiveDegree) {
  Rng rng = make_rng(22);
  DclvmParams p{1, std::vector<int>(10, 0), std::vector<double>(10, 1.0)};
  EXPECT_THROW(sample_dclvm(p, 0.0, rng), ValidationError);
}
