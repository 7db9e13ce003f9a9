/*
 * SPDX-FileCopyrightText: Copyright (c) 2026, nacgof contributors.
 * SPDX-License-Identifier: Apache-2.0
 */

#include "nacgof/gof.hpp"

#include "nacgof/error.hpp"

namespace nacgof {

bool has_calibrated_threshold(const TestConfig& cfg) {
  switch (cfg.method) {
    case Method::SNAC:
    case Method::SNACPlus: return true;
    case Method::LR:
    case Method::BIC: return false;
    default: return cfg.boot_reps > 0;
  }
}

namespace {

TestOutcome raw_test(LabelCache& labels, int K, const TestConfig& cfg, std::uint64_t seed) {
  switch (cfg.method) {
    case Method::NAC: return nac_full(labels, K, Variant::Plain, cfg.nac);
    case Method::NACPlus: return nac_full(labels, K, Variant::Plus, cfg.nac);
    case Method::SNAC:
      return snac(labels, K, Variant::Plain, derive_seed(seed, static_cast<std::uint64_t>(K)), cfg.nac);
    case Method::SNACPlus:
      return snac(labels, K, Variant::Plus, derive_seed(seed, static_cast<std::uint64_t>(K)), cfg.nac);
    case Method::AS: return as_statistic(labels, K, AsVariant::DCSBM, cfg.cluster.eig);
    case Method::ASSBM: return as_statistic(labels, K, AsVariant::SBM, cfg.cluster.eig);
    case Method::LR: {
      TestOutcome out;
      out.method = Method::LR;
      out.K = K;
      out.L = K + 1;
      out.statistic = lr_statistic(labels, K);
      out.seed = seed;
      return out;
    }
    case Method::BIC: {
      TestOutcome out;
      out.method = Method::BIC;
      out.K = K;
      out.L = K;
      out.statistic = bic_score(labels, K);
      out.seed = seed;
      out.metadata["penalty"] = bic_penalty(K, labels.graph().n());
      return out;
    }
  }
  throw ValidationError("unsupported method");
}

}  // namespace

TestOutcome run_test(LabelCache& labels, int K, const TestConfig& cfg, std::uint64_t seed) {
  if (cfg.boot_reps <= 0) {
    TestOutcome out = raw_test(labels, K, cfg, seed);
    out.seed = seed;
    return out;
  }
  TestConfig inner = cfg;
  inner.boot_reps = 0;
  StatisticFn base = [&labels, K, inner](const SparseGraph& g, std::uint64_t s) {
    if (&g == &labels.graph()) return raw_test(labels, K, inner, s);
    LabelCache fresh(g, inner.cluster, s);
    return raw_test(fresh, K, inner, s);
  };
  BootstrapOptions bo;
  bo.reps = cfg.boot_reps;
  bo.poisson = cfg.poisson_boot;
  bo.two_sided = cfg.nac.two_sided;
  TestOutcome out = bootstrap_debias(labels, K, base, seed, bo);
  out.seed = seed;
  return out;
}

TestOutcome run_test(const SparseGraph& g, int K, const TestConfig& cfg, std::uint64_t seed) {
  LabelCache labels(g, cfg.cluster, seed);
  return run_test(labels, K, cfg, seed);
}

}  // namespace nacgof
