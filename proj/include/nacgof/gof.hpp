/*
 * SPDX-FileCopyrightText: Copyright (c) 2026, nacgof contributors.
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <cstdint>

#include "nacgof/baselines.hpp"
#include "nacgof/nac.hpp"
#include "nacgof/spectral.hpp"

namespace nacgof {

/// Everything needed to evaluate one statistic at one K.
struct TestConfig {
  Method method = Method::SNACPlus;
  ClusterOptions cluster;
  NacOptions nac;
  int boot_reps = 0;         // > 0 applies bootstrap debiasing with this many replicates
  bool poisson_boot = false;
};

/// True when the method's statistic can be compared against a normal threshold as is
/// (SNAC, SNAC+) or after debiasing.
bool has_calibrated_threshold(const TestConfig& cfg);

/// Evaluates cfg.method at K on the cached graph. SNAC variants use the split seed
/// derive_seed(seed, K); LR and BIC report raw values without p-values.
TestOutcome run_test(LabelCache& labels, int K, const TestConfig& cfg, std::uint64_t seed);

/// Same as run_test on a fresh cache for `g` seeded by `seed`.
TestOutcome run_test(const SparseGraph& g, int K, const TestConfig& cfg, std::uint64_t seed);

}  // namespace nacgof
