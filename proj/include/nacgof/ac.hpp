/*
 * SPDX-FileCopyrightText: Copyright (c) 2026, nacgof contributors.
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "nacgof/rng.hpp"

namespace nacgof {

/// Rows of multinomial counts. Row i holds X_{i,0..L-1}, its total d_i and its group g_i.
struct CompressedCounts {
  int L = 0;
  int K = 1;
  std::vector<std::int64_t> X;       // row-major, rows() x L
  std::vector<std::int64_t> d;       // row totals
  std::vector<int> groups;           // in [0, K)

  CompressedCounts() = default;
  CompressedCounts(std::size_t rows, int L, int K = 1);

  std::size_t rows() const { return d.size(); }
  std::int64_t& at(std::size_t i, int l) { return X[i * static_cast<std::size_t>(L) + l]; }
  std::int64_t at(std::size_t i, int l) const { return X[i * static_cast<std::size_t>(L) + l]; }

  /// Recomputes d as row sums of X.
  void recompute_totals();
  /// Throws ValidationError unless shapes agree, counts are nonnegative, row sums equal d
  /// and groups lie in [0, K).
  void validate() const;
};

/// psi(x, y) = (x - y)^2 / y with psi(0, 0) = 0.
inline double psi(double x, double y) {
  if (y == 0.0) return x == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  double r = x - y;
  return r * r / y;
}

/// Which rows count toward n_effective.
enum class RowCounting {
  PositiveDegree,  // rows with d_i = 0 are excluded
  AllRows,         // every row counts, as in the literal |S2|
};

struct ChiSquareGroups {
  double y_stat = 0;
  Eigen::MatrixXd probs;             // K x L matrix used (pooled unless supplied)
  std::size_t n_effective = 0;
  std::vector<bool> skipped_groups;  // groups with zero total degree
};

/// Y = sum_k sum_{i in G_k} sum_l psi(X_il, d_i p_kl). Without `probs`, p is the pooled
/// estimate p_kl = sum_{G_k} X_il / sum_{G_k} d_i.
ChiSquareGroups chi_square_groups(const CompressedCounts& counts,
                                  const Eigen::MatrixXd* probs = nullptr,
                                  RowCounting counting = RowCounting::PositiveDegree);

/// T = (Y / gamma - gamma) / sqrt(2), gamma = sqrt(n_effective (L - 1)).
double ac_adjust(double y, std::size_t n_effective, int L);

/// (n^{-1} sum 1 / d_i)^{-1}. Throws on any zero entry.
double harmonic_mean(std::span<const double> d);

/// min over nonempty groups of (|G_k| / n) * mean_{G_k} d, over rows with d_i > 0 when
/// counting == PositiveDegree.
double group_omega(const CompressedCounts& counts,
                   RowCounting counting = RowCounting::PositiveDegree);

struct AcResult {
  double y_stat = 0;
  double t_stat = 0;
  double gamma = 0;
  std::size_t n_effective = 0;
  double harmonic_mean_d = 0;
  double omega_n = 0;
};

/// chi_square_groups + ac_adjust + diagnostics.
AcResult ac_statistic(const CompressedCounts& counts, RowCounting counting = RowCounting::PositiveDegree);

/// Standard normal CDF.
double normal_cdf(double x);
/// Upper (one-sided) or two-sided normal p-value.
double normal_p_value(double t, bool two_sided = false);
/// Standard normal quantile.
double normal_quantile(double p);

/// Sup-distance between the empirical CDF of `samples` and `cdf`.
double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf);

/// Draws X_i ~ Mult(d_i, p) for all rows (one group) and returns T for each of `reps`
/// replicates. `p` empty means uniform over L categories.
std::vector<double> simulate_null_t(int L, std::span<const std::int64_t> d, std::span<const double> p,
                                    int reps, Rng& rng, std::vector<double>* y_out = nullptr);

/// KS distance of the simulated null T values to N(0, 1).
double chi_square_null_reference(int L, std::span<const std::int64_t> d, std::span<const double> p,
                                 int reps, Rng& rng);

/// Multinomial(d, p) draw by sequential conditional binomials.
void sample_multinomial(std::int64_t d, std::span<const double> p, Rng& rng,
                        std::span<std::int64_t> out);

}  // namespace nacgof
