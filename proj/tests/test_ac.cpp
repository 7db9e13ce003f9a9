/*
 * SPDX-FileCopyrightText: Copyright (c) 2026, nacgof contributors.
 * SPDX-License-Identifier: Apache-2.0
 */

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/chi_squared.hpp>

#include "nacgof/ac.hpp"
#include "nacgof/error.hpp"
#include "oracles.hpp"

using namespace nacgof;

namespace {

CompressedCounts make_counts(const std::vector<std::vector<std::int64_t>>& rows,
                             std::vector<int> groups = {}, int K = 1) {
  const int L = static_cast<int>(rows.front().size());
  CompressedCounts c(rows.size(), L, K);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (int l = 0; l < L; ++l) c.at(i, l) = rows[i][l];
  c.recompute_totals();
  if (!groups.empty()) c.groups = std::move(groups);
  return c;
}

CompressedCounts random_counts(int m, int L, int K, int dmax, Rng& rng) {
  std::uniform_int_distribution<int> cnt(0, dmax);
  std::uniform_int_distribution<int> grp(0, K - 1);
  CompressedCounts c(static_cast<std::size_t>(m), L, K);
  for (int i = 0; i < m; ++i) {
    for (int l = 0; l < L; ++l) c.at(i, l) = cnt(rng);
    c.groups[i] = i < K ? i : grp(rng);
  }
  c.recompute_totals();
  return c;
}

// Mean and variance of Y = sum_l psi(X_l, d p_l) for one Mult(d, p) row.
std::pair<double, double> single_row_moments(int d, const std::vector<double>& p, int reps, Rng& rng,
                                             double* se_mean, double* se_var) {
  const int L = static_cast<int>(p.size());
  CompressedCounts c(1, L, 1);
  c.d[0] = d;
  Eigen::MatrixXd P(1, L);
  for (int l = 0; l < L; ++l) P(0, l) = p[l];
  std::vector<double> y(reps);
  for (int r = 0; r < reps; ++r) {
    sample_multinomial(d, p, rng, {c.X.data(), static_cast<std::size_t>(L)});
    y[r] = chi_square_groups(c, &P).y_stat;
  }
  const double mean = std::accumulate(y.begin(), y.end(), 0.0) / reps;
  double m2 = 0, m4 = 0;
  for (double v : y) {
    m2 += (v - mean) * (v - mean) / reps;
    m4 += std::pow(v - mean, 4) / reps;
  }
  const double var = m2 * reps / (reps - 1.0);
  *se_mean = std::sqrt(var / reps);
  *se_var = std::sqrt(std::max(m4 - m2 * m2, 0.0) / reps);
  return {mean, var};
}

double variance_formula(int d, const std::vector<double>& p) {
  const double L = static_cast<double>(p.size());
  double inv = 0;
  for (double x : p) inv += 1.0 / x;
  return (1.0 - 1.0 / d) * 2.0 * (L - 1.0) + (inv - L * L) / d;
}

}  // namespace

TEST(ChiSquare, BalancedRowsGiveZero) {
  auto r = chi_square_groups(make_counts({{1, 1}, {1, 1}}));
  EXPECT_EQ(r.y_stat, 0.0);
  EXPECT_DOUBLE_EQ(r.probs(0, 0), 0.5);
  EXPECT_DOUBLE_EQ(r.probs(0, 1), 0.5);
}

TEST(ChiSquare, HandEvaluatedPsi) {
  auto r = chi_square_groups(make_counts({{2, 0}, {0, 2}}));
  EXPECT_DOUBLE_EQ(r.y_stat, 4.0);
  EXPECT_DOUBLE_EQ(r.probs(0, 0), 0.5);
}

TEST(ChiSquare, AdditiveOverGroups) {
  auto r = chi_square_groups(make_counts({{1, 1}, {1, 1}, {2, 0}, {0, 2}}, {0, 0, 1, 1}, 2));
  EXPECT_DOUBLE_EQ(r.y_stat, 4.0);
  EXPECT_EQ(r.n_effective, 4u);
}

TEST(ChiSquare, ZeroRowsExcluded) {
  auto c = make_counts({{2, 0}, {0, 2}, {0, 0}});
  EXPECT_EQ(chi_square_groups(c).n_effective, 2u);
  EXPECT_EQ(chi_square_groups(c, nullptr, RowCounting::AllRows).n_effective, 3u);
  EXPECT_DOUBLE_EQ(chi_square_groups(c).y_stat, 4.0);
}

TEST(ChiSquare, ZeroDegreeGroupSkipped) {
  auto r = chi_square_groups(make_counts({{2, 0}, {0, 2}, {0, 0}}, {0, 0, 1}, 2));
  EXPECT_FALSE(r.skipped_groups[0]);
  EXPECT_TRUE(r.skipped_groups[1]);
  EXPECT_DOUBLE_EQ(r.y_stat, 4.0);
}

TEST(ChiSquare, RejectsOffSimplexProbabilities) {
  auto c = make_counts({{1, 1}});
  Eigen::MatrixXd p(1, 2);
  p << 0.5, 0.6;
  EXPECT_THROW(chi_square_groups(c, &p), ValidationError);
  p << 0.5, 0.5 + 1e-13;
  EXPECT_NO_THROW(chi_square_groups(c, &p));
}

TEST(ChiSquare, RejectsShapeMismatch) {
  auto c = make_counts({{1, 1}});
  Eigen::MatrixXd p = Eigen::MatrixXd::Constant(1, 3, 1.0 / 3);
  try {
    chi_square_groups(c, &p);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("L mismatch"), std::string::npos);
  }
}

TEST(ChiSquare, MatchesTripleLoopOracle) {
  Rng rng = make_rng(1);
  for (int rep = 0; rep < 50; ++rep) {
    const int K = 1 + rep % 4, L = 2 + rep % 5;
    auto c = random_counts(30 + rep, L, K, 6, rng);
    Eigen::MatrixXd X(static_cast<Eigen::Index>(c.rows()), L);
    for (std::size_t i = 0; i < c.rows(); ++i)
      for (int l = 0; l < L; ++l) X(i, l) = static_cast<double>(c.at(i, l));
    const double expect = oracle::chi_square(X, c.groups, K);
    EXPECT_NEAR(chi_square_groups(c).y_stat, expect, 1e-10 * std::max(1.0, expect));
  }
}

TEST(ChiSquare, PermutationInvariantExactly) {
  Rng rng = make_rng(2);
  for (int rep = 0; rep < 30; ++rep) {
    const int K = 3, L = 5;
    auto c = random_counts(60, L, K, 9, rng);
    const auto base = ac_statistic(c);
    std::vector<int> gp(K), cp(L);
    std::iota(gp.begin(), gp.end(), 0);
    std::iota(cp.begin(), cp.end(), 0);
    std::shuffle(gp.begin(), gp.end(), rng);
    std::shuffle(cp.begin(), cp.end(), rng);
    CompressedCounts perm = c;
    for (std::size_t i = 0; i < c.rows(); ++i) {
      perm.groups[i] = gp[c.groups[i]];
      for (int l = 0; l < L; ++l) perm.at(i, cp[l]) = c.at(i, l);
    }
    const auto r = ac_statistic(perm);
    EXPECT_EQ(r.y_stat, base.y_stat);
    EXPECT_EQ(r.t_stat, base.t_stat);
  }
}

TEST(ChiSquare, PsiScalesLinearly) {
  for (double x : {0.0, 1.0, 3.0, 7.0})
    for (double y : {0.5, 2.0, 4.5})
      for (double c : {2.0, 3.0, 10.0}) EXPECT_NEAR(psi(c * x, c * y), c * psi(x, y), 1e-12 * c * (1 + psi(x, y)));
  EXPECT_EQ(psi(0.0, 0.0), 0.0);
}

TEST(Adjust, Centering) {
  EXPECT_NEAR(ac_adjust(100.0 * 4, 100, 5), 0.0, 1e-12);
}

TEST(Adjust, WorkedValue) {
  EXPECT_NEAR(ac_adjust(500, 100, 5), (25.0 - 20.0) / std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(ac_adjust(500, 100, 5), 3.5355, 1e-4);
}

TEST(Adjust, LowerBound) {
  const double gamma = std::sqrt(40.0 * 2);
  EXPECT_NEAR(ac_adjust(0, 40, 3), -gamma / std::sqrt(2.0), 1e-12);
}

TEST(Adjust, OneCategoryUndefined) {
  try {
    ac_adjust(1.0, 10, 1);
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("AC undefined for one category"), std::string::npos);
  }
}

TEST(AcStatistic, FieldsConsistent) {
  Rng rng = make_rng(3);
  auto c = random_counts(50, 4, 2, 5, rng);
  auto r = ac_statistic(c);
  EXPECT_GE(r.y_stat, 0.0);
  EXPECT_EQ(r.t_stat, (r.y_stat / r.gamma - r.gamma) / std::sqrt(2.0));
  EXPECT_DOUBLE_EQ(r.gamma, std::sqrt(r.n_effective * 3.0));
}

TEST(Harmonic, Examples) {
  EXPECT_DOUBLE_EQ(harmonic_mean(std::vector<double>{4, 4, 4}), 4.0);
  EXPECT_NEAR(harmonic_mean(std::vector<double>{1, 1, 2}), 1.2, 1e-15);
  EXPECT_THROW(harmonic_mean(std::vector<double>{1, 0, 2}), ValidationError);
}

TEST(Omega, SingleGroup) {
  auto c = make_counts({{1, 1}, {3, 1}});
  EXPECT_DOUBLE_EQ(group_omega(c), 3.0);
}

TEST(Omega, MinimumOverGroups) {
  auto c = make_counts({{1, 1}, {3, 1}, {5, 5}}, {0, 0, 1}, 2);
  // group 0: (2/3) * 3 = 2, group 1: (1/3) * 10
  EXPECT_DOUBLE_EQ(group_omega(c), 2.0);
}

TEST(Moments, MeanAndVarianceOfSingleRow) {
  Rng rng = make_rng(4);
  struct Case {
    int d;
    std::vector<double> p;
  };
  for (const Case& cs : {Case{2, {0.5, 0.5}}, Case{10, {1.0 / 3, 1.0 / 3, 1.0 / 3}},
                         Case{20, {0.1, 0.2, 0.3, 0.4}}}) {
    double se_m = 0, se_v = 0;
    auto [mean, var] = single_row_moments(cs.d, cs.p, 40000, rng, &se_m, &se_v);
    const double L = static_cast<double>(cs.p.size());
    EXPECT_LT(std::abs(mean - (L - 1)), 3 * se_m) << "d=" << cs.d;
    EXPECT_LT(std::abs(var - variance_formula(cs.d, cs.p)), 3 * se_v) << "d=" << cs.d;
  }
  EXPECT_DOUBLE_EQ(variance_formula(2, {0.5, 0.5}), 1.0);
}

TEST(NullReference, LargeDegreesNearNormal) {
  Rng rng = make_rng(5);
  std::vector<std::int64_t> d(500, 50);
  // 500 replicates leave the KS sampling noise near the tolerance, so use more.
  EXPECT_LE(chi_square_null_reference(3, d, {}, 2000, rng), 0.08);
}

TEST(NullReference, ClassicalChiSquareLimit) {
  Rng rng = make_rng(6);
  std::vector<std::int64_t> d(3, 500);
  std::vector<double> y;
  simulate_null_t(3, d, {}, 2000, rng, &y);
  boost::math::chi_squared chi4(4.0);
  const double ks = ks_distance(y, [&](double x) { return x <= 0 ? 0.0 : boost::math::cdf(chi4, x); });
  EXPECT_LE(ks, 0.1);
}

TEST(NullReference, SmallDegreesWorse) {
  Rng rng = make_rng(7);
  std::vector<std::int64_t> small(500, 2), large(500, 50);
  const double ks_small = chi_square_null_reference(3, small, {}, 500, rng);
  const double ks_large = chi_square_null_reference(3, large, {}, 500, rng);
  EXPECT_GT(ks_small, ks_large);
}

TEST(NullReference, NeedsEnoughReplicates) {
  Rng rng = make_rng(8);
  std::vector<std::int64_t> d(10, 5);
  EXPECT_THROW(chi_square_null_reference(3, d, {}, 50, rng), ValidationError);
}

TEST(Multinomial, ConservesTotal) {
  Rng rng = make_rng(9);
  std::vector<double> p = {0.1, 0.0, 0.6, 0.3};
  std::vector<std::int64_t> out(4);
  for (int r = 0; r < 1000; ++r) {
    sample_multinomial(37, p, rng, out);
    EXPECT_EQ(std::accumulate(out.begin(), out.end(), std::int64_t{0}), 37);
    EXPECT_EQ(out[1], 0);
  }
}

TEST(Normal, QuantileAndPValue) {
  EXPECT_NEAR(normal_quantile(1 - 1e-6), 4.753424308822899, 1e-9);
  EXPECT_NEAR(normal_p_value(1.959963984540054, true), 0.05, 1e-12);
  EXPECT_NEAR(normal_p_value(0.0), 0.5, 1e-15);
  EXPECT_NEAR(normal_cdf(1.0) + normal_cdf(-1.0), 1.0, 1e-15);
}
