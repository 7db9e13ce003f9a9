/*
 * SPDX-FileCopyrightText: Copyright (c) 2026, nacgof contributors.
 * SPDX-License-Identifier: Apache-2.0
 */

#include "nacgof/spline.hpp"

#include <algorithm>
#include <functional>
#include <cmath>
#include <limits>
#include <sstream>

#include "nacgof/error.hpp"

namespace nacgof {

CubicBSplineBasis::CubicBSplineBasis(std::vector<double> breaks) : breaks_(std::move(breaks)) {
  if (breaks_.size() < 2) throw ValidationError("spline basis needs at least two breakpoints");
  knots_.assign(3, breaks_.front());
  knots_.insert(knots_.end(), breaks_.begin(), breaks_.end());
  knots_.insert(knots_.end(), 3, breaks_.back());
}

Eigen::VectorXd CubicBSplineBasis::eval(double x, int deriv) const {
  const auto& t = knots_;
  const int len = static_cast<int>(t.size());
  x = std::clamp(x, breaks_.front(), breaks_.back());
  int span = static_cast<int>(std::upper_bound(t.begin(), t.end(), x) - t.begin()) - 1;
  span = std::clamp(span, 3, len - 5);

  // N[p][i]: degree-p basis values, i in [0, len - 1 - p).
  std::vector<std::vector<double>> N(4);
  N[0].assign(static_cast<std::size_t>(len - 1), 0.0);
  N[0][span] = 1.0;
  auto ratio = [](double num, double den) { return den > 0.0 ? num / den : 0.0; };
  for (int p = 1; p <= 3; ++p) {
    N[p].assign(static_cast<std::size_t>(len - 1 - p), 0.0);
    for (int i = 0; i < len - 1 - p; ++i)
      N[p][i] = ratio(x - t[i], t[i + p] - t[i]) * N[p - 1][i] +
                ratio(t[i + p + 1] - x, t[i + p + 1] - t[i + 1]) * N[p - 1][i + 1];
  }
  // r-th derivative of degree-p functions from (r-1)-th derivative of degree p-1.
  std::function<std::vector<double>(int, int)> D = [&](int r, int p) -> std::vector<double> {
    if (r == 0) return N[p];
    auto lower = D(r - 1, p - 1);
    std::vector<double> out(static_cast<std::size_t>(len - 1 - p), 0.0);
    for (int i = 0; i < len - 1 - p; ++i)
      out[i] = p * (ratio(lower[i], t[i + p] - t[i]) - ratio(lower[i + 1], t[i + p + 1] - t[i + 1]));
    return out;
  };
  auto v = D(deriv, 3);
  return Eigen::Map<Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

Eigen::MatrixXd CubicBSplineBasis::roughness() const {
  const int p = size();
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(p, p);
  const double g = 1.0 / std::sqrt(3.0);
  for (std::size_t s = 0; s + 1 < breaks_.size(); ++s) {
    const double half = 0.5 * (breaks_[s + 1] - breaks_[s]);
    const double mid = 0.5 * (breaks_[s + 1] + breaks_[s]);
    for (double node : {mid - half * g, mid + half * g}) {
      Eigen::VectorXd b2 = eval(node, 2);
      omega.noalias() += half * b2 * b2.transpose();
    }
  }
  return omega;
}

namespace {

struct Solved {
  Eigen::VectorXd coef;
  double rss = 0;
  double edf = 0;
  double gcv = 0;
};

}  // namespace

SmoothingSpline SmoothingSpline::fit(std::span<const double> x, std::span<const double> y,
                                     const SplineFitOptions& opts) {
  if (x.size() != y.size()) throw ValidationError("spline x and y lengths differ");
  std::vector<double> breaks(x.begin(), x.end());
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  if (breaks.size() < 4) {
    std::ostringstream msg;
    msg << "rank-deficient spline basis: need >= 4 distinct abscissae, got " << breaks.size()
        << " (knots:";
    for (double b : breaks) msg << ' ' << b;
    msg << ')';
    throw NumericalError(msg.str());
  }

  SmoothingSpline s{CubicBSplineBasis(breaks)};
  const auto N = static_cast<Eigen::Index>(x.size());
  const int p = s.basis_.size();
  Eigen::MatrixXd X(N, p);
  Eigen::VectorXd Y(N);
  for (Eigen::Index i = 0; i < N; ++i) {
    X.row(i) = s.basis_.eval(x[i], 0).transpose();
    Y(i) = y[i];
  }
  const Eigen::MatrixXd XtX = X.transpose() * X;
  const Eigen::VectorXd XtY = X.transpose() * Y;
  const Eigen::MatrixXd omega = s.basis_.roughness();
  const double r = XtX.trace() / omega.trace();

  auto solve = [&](double rel) {
    Eigen::MatrixXd M = XtX + r * rel * omega;
    Eigen::LLT<Eigen::MatrixXd> llt(M);
    if (llt.info() != Eigen::Success) {
      std::ostringstream msg;
      msg << "rank-deficient penalized system at relative penalty " << rel << " (knots:";
      for (double b : breaks) msg << ' ' << b;
      msg << ')';
      throw NumericalError(msg.str());
    }
    Solved out;
    out.coef = llt.solve(XtY);
    out.rss = (Y - X * out.coef).squaredNorm();
    out.edf = llt.solve(XtX).trace();
    const double denom = 1.0 - out.edf / static_cast<double>(N);
    out.gcv = denom > 1e-12 ? (out.rss / static_cast<double>(N)) / (denom * denom)
                            : std::numeric_limits<double>::infinity();
    return out;
  };

  double rel = 0.0;
  Solved best;
  if (opts.relative_penalty) {
    rel = *opts.relative_penalty;
    best = solve(rel);
  } else if (opts.mode == SmoothingMode::Fixed) {
    if (!(opts.smoothness >= 0.0 && opts.smoothness <= 1.0))
      throw ValidationError("smoothness must lie in [0, 1]");
    rel = std::pow(256.0, 3.0 * opts.smoothness - 1.0);
    best = solve(rel);
  } else {
    if (opts.grid_size < 2) throw ValidationError("GCV grid needs at least two points");
    best.gcv = std::numeric_limits<double>::infinity();
    for (int k = 0; k < opts.grid_size; ++k) {
      const double e = opts.grid_lo + (opts.grid_hi - opts.grid_lo) * k / (opts.grid_size - 1);
      const double cand = std::pow(10.0, e);
      Solved sol = solve(cand);
      s.path_.emplace_back(cand, sol.gcv);
      if (sol.gcv < best.gcv || best.coef.size() == 0) {
        best = std::move(sol);
        rel = cand;
      }
    }
  }
  s.coef_ = std::move(best.coef);
  s.rel_penalty_ = rel;
  s.lambda_ = r * rel;
  s.edf_ = best.edf;
  s.gcv_ = best.gcv;
  s.rss_ = best.rss;
  return s;
}

ElbowDip find_elbow_dip(const SmoothingSpline& fit, double step, double tol) {
  if (!(step > 0.0)) throw ValidationError("grid step must be positive");
  const double lo = fit.x_min(), hi = fit.x_max();
  const auto count = static_cast<int>(std::floor((hi - lo) / step + 1e-9)) + 1;
  ElbowDip out;
  double best = -std::numeric_limits<double>::infinity();
  double prev_d1 = 0.0;
  for (int k = 0; k < count; ++k) {
    const double x = std::min(lo + k * step, hi);
    const double d2 = fit.d2(x);
    if (d2 > best) {
      best = d2;
      out.elbow = x;
    }
    const double d1 = fit.d1(x);
    if (k > 0 && prev_d1 <= tol && d1 > tol) out.upturns.push_back(x);
    prev_d1 = d1;
  }
  out.elbow_rounded = static_cast<int>(std::lround(out.elbow));
  if (!out.upturns.empty()) out.dip = out.upturns.front();
  return out;
}

}  // namespace nacgof
