/*
 * SPDX-FileCopyrightText: Copyright (c) 2026, nacgof contributors.
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nacgof/gof.hpp"
#include "nacgof/spline.hpp"

namespace nacgof {

struct SelectionResult {
  int chosen_K = 0;
  std::vector<int> tested_Ks;
  std::vector<double> statistics;
  std::vector<std::optional<double>> p_values;
  double alpha = 1e-6;
  bool censored = false;
  std::string method;
};

/// Sequential testing from below: K = K_min, K_min + 1, ... until the first K that is not
/// rejected at level alpha; censored when every K up to K_max is rejected.
/// Requires a calibrated method (SNAC, SNAC+ or a debiased statistic).
SelectionResult select_k(LabelCache& labels, int K_min, int K_max, const TestConfig& cfg,
                         double alpha, std::uint64_t seed);

/// argmax of the BIC score over [K_min, K_max].
SelectionResult select_k_bic(LabelCache& labels, int K_min, int K_max);

struct ProfilePoint {
  int K = 0;
  double statistic = 0;
  std::uint64_t split_seed = 0;
};

/// `repeats` SNAC+ values per K, each on its own split (seed derive_seed(derive_seed(seed, K), r)).
/// The row clustering for each K is computed once and shared by all its splits.
std::vector<ProfilePoint> profile_points(LabelCache& labels, const std::vector<int>& Ks, int repeats,
                                         std::uint64_t seed, const NacOptions& nac = {},
                                         int threads = 1);

struct ProfileCurve {
  std::vector<ProfilePoint> points;
  SmoothingSpline fit_gcv;
  SmoothingSpline fit_smooth;
  std::vector<double> grid;
  ElbowDip gcv_features;
  ElbowDip smooth_features;
};

/// Fits both curves (GCV and Fixed(smoothness)) and locates elbow and dip on each.
ProfileCurve build_profile_curve(std::vector<ProfilePoint> points, double smoothness = 0.3,
                                 double step = 0.01);

}  // namespace nacgof
