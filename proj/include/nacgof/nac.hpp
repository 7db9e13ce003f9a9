/*
 * SPDX-FileCopyrightText: Copyright (c) 2026, nacgof contributors.
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "nacgof/ac.hpp"
#include "nacgof/graph.hpp"
#include "nacgof/spectral.hpp"

namespace nacgof {

enum class Method { NAC, NACPlus, SNAC, SNACPlus, AS, ASSBM, LR, BIC };

/// "NAC", "NAC+", "SNAC", "SNAC+", "AS", "AS-SBM", "LR", "BIC".
std::string method_name(Method m);
/// Case-insensitive inverse of method_name; throws ValidationError on unknown names.
Method parse_method(const std::string& name);

enum class Variant { Plain, Plus };

struct TestOutcome {
  Method method = Method::SNACPlus;
  int K = 0;
  int L = 0;
  double statistic = 0;
  std::optional<double> p_value;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> split_seed;
  std::optional<NodeSplit> split;
  bool debiased = false;
  nlohmann::json metadata = nlohmann::json::object();
};

struct RhoHat {
  Eigen::MatrixXd rho;              // K x L
  std::vector<double> group_degree; // sum of d over each row group
  std::vector<bool> degenerate;     // groups with zero degree (all-zero rho row)
};

/// X_il = sum_{j in cols, col_labels[j] = l} A_ij for i in rows, computed in
/// O(nnz(A_{rows, .})). col_labels is aligned with `cols`; row_groups (aligned with `rows`,
/// empty for a single group) becomes the group vector of the result.
CompressedCounts column_compress(const SparseGraph& g, std::span<const NodeId> rows,
                                 std::span<const NodeId> cols, std::span<const int> col_labels,
                                 int L, std::span<const int> row_groups = {}, int K = 1);

RhoHat rho_hat(const CompressedCounts& counts);

struct NacOptions {
  RowCounting counting = RowCounting::PositiveDegree;
  bool two_sided = false;
  bool keep_split = false;  // store the NodeSplit in the outcome
};

/// Network AC statistic on fixed labels: rows grouped by zhat (indexed by node over the
/// whole graph), columns `cols` labeled by yhat (aligned with cols).
AcResult nac_statistic(const SparseGraph& g, std::span<const NodeId> rows, std::span<const int> zhat,
                       int K, std::span<const NodeId> cols, std::span<const int> yhat, int L,
                       RowCounting counting = RowCounting::PositiveDegree);

/// Full NAC (yhat = zhat, L = K) or NAC+ (yhat from K + 1 communities) on S1 = S2 = [n].
/// No p-value: the labels depend on the tested entries.
TestOutcome nac_full(LabelCache& labels, int K, Variant variant, const NacOptions& opts = {});

/// Subsampled SNAC / SNAC+: zhat on the whole graph, random half-split (S1, S2), yhat fitted
/// on A_{S1 S1}, test on A_{S2 S1}. p-value from N(0, 1).
TestOutcome snac(LabelCache& labels, int K, Variant variant, std::uint64_t split_seed,
                 const NacOptions& opts = {});

using StatisticFn = std::function<TestOutcome(const SparseGraph& g, std::uint64_t seed)>;

struct BootstrapOptions {
  int reps = 10;
  bool poisson = false;  // sample Poisson instead of Bernoulli replicates
  bool two_sided = false;
};

/// (T - mean) / sd over `reps` networks sampled from the fitted K-community SBM(zhat, Bhat).
/// `base` is evaluated on the observed graph and on every replicate with derived seeds.
TestOutcome bootstrap_debias(LabelCache& labels, int K, const StatisticFn& base,
                             std::uint64_t seed, const BootstrapOptions& opts = {});

}  // namespace nacgof
