/*
 * SPDX-FileCopyrightText: Copyright (c) 2026, nacgof contributors.
 * SPDX-License-Identifier: Apache-2.0
 */

#include "nacgof/selection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nacgof/error.hpp"
#include "nacgof/parallel.hpp"

namespace nacgof {

SelectionResult select_k(LabelCache& labels, int K_min, int K_max, const TestConfig& cfg,
                         double alpha, std::uint64_t seed) {
  if (K_min < 1 || K_min > K_max) throw ValidationError("need 1 <= K_min <= K_max");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("alpha must lie in (0, 1)");
  if (!has_calibrated_threshold(cfg))
    throw ValidationError("no calibrated threshold for " + method_name(cfg.method) +
                          " (use SNAC/SNAC+ or enable bootstrap debiasing)");
  const bool two = cfg.nac.two_sided;
  const double threshold = two ? normal_quantile(1.0 - alpha / 2.0) : normal_quantile(1.0 - alpha);

  SelectionResult out;
  out.alpha = alpha;
  out.method = method_name(cfg.method) + (cfg.boot_reps > 0 ? "-boot" : "");
  for (int K = K_min; K <= K_max; ++K) {
    TestOutcome t = run_test(labels, K, cfg, seed);
    out.tested_Ks.push_back(K);
    out.statistics.push_back(t.statistic);
    out.p_values.push_back(t.p_value);
    const bool reject = two ? std::abs(t.statistic) > threshold : t.statistic > threshold;
    if (!reject) {
      out.chosen_K = K;
      return out;
    }
  }
  out.chosen_K = K_max;
  out.censored = true;
  return out;
}

SelectionResult select_k_bic(LabelCache& labels, int K_min, int K_max) {
  if (K_min < 1 || K_min > K_max) throw ValidationError("need 1 <= K_min <= K_max");
  SelectionResult out;
  out.method = "BIC";
  out.alpha = 0.0;
  double best = -std::numeric_limits<double>::infinity();
  for (int K = K_min; K <= K_max; ++K) {
    const double s = bic_score(labels, K);
    out.tested_Ks.push_back(K);
    out.statistics.push_back(s);
    out.p_values.emplace_back();
    if (s > best) {
      best = s;
      out.chosen_K = K;
    }
  }
  return out;
}

std::vector<ProfilePoint> profile_points(LabelCache& labels, const std::vector<int>& Ks, int repeats,
                                         std::uint64_t seed, const NacOptions& nac, int threads) {
  if (repeats < 2) throw ValidationError("profile needs repeats >= 2");
  for (int K : Ks) labels.labels(K);  // memoize row clusterings before fanning out

  std::vector<ProfilePoint> out(Ks.size() * static_cast<std::size_t>(repeats));
  parallel_for(out.size(), threads, [&](std::size_t idx) {
    const int K = Ks[idx / repeats];
    const auto r = static_cast<std::uint64_t>(idx % repeats);
    const std::uint64_t split_seed = derive_seed(derive_seed(seed, static_cast<std::uint64_t>(K)), r);
    TestOutcome t = snac(labels, K, Variant::Plus, split_seed, nac);
    out[idx] = {K, t.statistic, split_seed};
  });
  return out;
}

ProfileCurve build_profile_curve(std::vector<ProfilePoint> points, double smoothness, double step) {
  std::vector<double> x, y;
  for (const auto& p : points) {
    x.push_back(p.K);
    y.push_back(p.statistic);
  }
  SplineFitOptions gcv;
  SplineFitOptions fixed;
  fixed.mode = SmoothingMode::Fixed;
  fixed.smoothness = smoothness;
  auto fit_gcv = SmoothingSpline::fit(x, y, gcv);
  auto fit_smooth = SmoothingSpline::fit(x, y, fixed);
  std::vector<double> grid;
  for (double g = fit_gcv.x_min(); g <= fit_gcv.x_max() + 1e-9; g += step) grid.push_back(std::min(g, fit_gcv.x_max()));
  ElbowDip fg = find_elbow_dip(fit_gcv, step);
  ElbowDip fs = find_elbow_dip(fit_smooth, step);
  return ProfileCurve{std::move(points), std::move(fit_gcv), std::move(fit_smooth), std::move(grid), fg, fs};
}

}  // namespace nacgof
