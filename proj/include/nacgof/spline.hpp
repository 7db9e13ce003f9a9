/*
 * SPDX-FileCopyrightText: Copyright (c) 2026, nacgof contributors.
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace nacgof {

/// Cubic B-spline basis on the clamped knot vector built from sorted distinct breakpoints.
class CubicBSplineBasis {
 public:
  explicit CubicBSplineBasis(std::vector<double> breaks);

  int size() const { return static_cast<int>(breaks_.size()) + 2; }
  const std::vector<double>& breaks() const { return breaks_; }

  /// Values of all basis functions (deriv = 0, 1 or 2) at x, clamped to the break range.
  Eigen::VectorXd eval(double x, int deriv = 0) const;

  /// Omega_ab = integral of B_a'' B_b'' over the break range (exact, two-point Gauss per piece).
  Eigen::MatrixXd roughness() const;

 private:
  std::vector<double> breaks_;
  std::vector<double> knots_;
};

enum class SmoothingMode { GCV, Fixed };

struct SplineFitOptions {
  SmoothingMode mode = SmoothingMode::GCV;
  /// Smoothness in [0, 1] for Fixed mode: relative penalty 256^(3 s - 1).
  double smoothness = 0.3;
  /// Relative penalty grid for GCV: 10^e for `grid_size` exponents evenly spaced in
  /// [grid_lo, grid_hi].
  double grid_lo = -6.0;
  double grid_hi = 2.0;
  int grid_size = 41;
  /// Explicit relative penalty; overrides mode when set.
  std::optional<double> relative_penalty;
};

/// Penalized cubic regression spline with knots at the distinct abscissae and penalty
/// lambda * integral f''^2, lambda = r * relative penalty, r = tr(X^T X) / tr(Omega).
class SmoothingSpline {
 public:
  static SmoothingSpline fit(std::span<const double> x, std::span<const double> y,
                             const SplineFitOptions& opts = {});

  double value(double x) const { return basis_.eval(x, 0).dot(coef_); }
  double d1(double x) const { return basis_.eval(x, 1).dot(coef_); }
  double d2(double x) const { return basis_.eval(x, 2).dot(coef_); }

  const Eigen::VectorXd& coefficients() const { return coef_; }
  const CubicBSplineBasis& basis() const { return basis_; }
  double lambda() const { return lambda_; }
  double relative_penalty() const { return rel_penalty_; }
  double edf() const { return edf_; }
  double gcv() const { return gcv_; }
  double rss() const { return rss_; }
  /// integral of f''^2.
  double roughness() const { return coef_.dot(basis_.roughness() * coef_); }
  double x_min() const { return basis_.breaks().front(); }
  double x_max() const { return basis_.breaks().back(); }

  /// (relative penalty, GCV score) for every candidate examined in GCV mode.
  const std::vector<std::pair<double, double>>& gcv_path() const { return path_; }

 private:
  SmoothingSpline(CubicBSplineBasis basis) : basis_(std::move(basis)) {}

  CubicBSplineBasis basis_;
  Eigen::VectorXd coef_;
  double lambda_ = 0;
  double rel_penalty_ = 0;
  double edf_ = 0;
  double gcv_ = 0;
  double rss_ = 0;
  std::vector<std::pair<double, double>> path_;
};

struct ElbowDip {
  double elbow = 0;                  // argmax f'' on the grid
  int elbow_rounded = 0;
  std::optional<double> dip;         // first grid point where f' turns positive
  std::vector<double> upturns;       // every such crossing
};

/// Scans [fit.x_min(), fit.x_max()] with the given step. A crossing counts when f' goes
/// from <= tol to > tol.
ElbowDip find_elbow_dip(const SmoothingSpline& fit, double step = 0.01, double tol = 1e-9);

}  // namespace nacgof
