/*
 * SPDX-FileCopyrightText: Copyright (c) 2026, nacgof contributors.
 * SPDX-License-Identifier: Apache-2.0
 */

#include "nacgof/ac.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/math/distributions/normal.hpp>

#include "nacgof/error.hpp"

namespace nacgof {

CompressedCounts::CompressedCounts(std::size_t rows, int L_, int K_)
    : L(L_), K(K_), X(rows * static_cast<std::size_t>(L_), 0), d(rows, 0), groups(rows, 0) {}

void CompressedCounts::recompute_totals() {
  for (std::size_t i = 0; i < rows(); ++i) {
    std::int64_t s = 0;
    for (int l = 0; l < L; ++l) s += at(i, l);
    d[i] = s;
  }
}

void CompressedCounts::validate() const {
  if (L < 1 || K < 1) throw ValidationError("counts need L >= 1 and K >= 1");
  if (X.size() != d.size() * static_cast<std::size_t>(L) || groups.size() != d.size())
    throw ValidationError("count matrix, totals and groups have inconsistent sizes");
  for (std::size_t i = 0; i < rows(); ++i) {
    std::int64_t s = 0;
    for (int l = 0; l < L; ++l) {
      if (at(i, l) < 0) throw ValidationError("negative count");
      s += at(i, l);
    }
    if (s != d[i]) throw ValidationError("row " + std::to_string(i) + " does not sum to its total");
    if (groups[i] < 0 || groups[i] >= K) throw ValidationError("group label out of range");
  }
}

ChiSquareGroups chi_square_groups(const CompressedCounts& counts, const Eigen::MatrixXd* probs,
                                  RowCounting counting) {
  counts.validate();
  const int K = counts.K;
  const int L = counts.L;
  ChiSquareGroups out;
  out.skipped_groups.assign(static_cast<std::size_t>(K), false);

  Eigen::VectorXd group_total = Eigen::VectorXd::Zero(K);
  for (std::size_t i = 0; i < counts.rows(); ++i)
    group_total(counts.groups[i]) += static_cast<double>(counts.d[i]);

  if (probs) {
    if (probs->rows() != K || probs->cols() != L)
      throw ValidationError("probability matrix must be K x L (L mismatch)");
    for (int k = 0; k < K; ++k) {
      if ((probs->row(k).array() < 0.0).any() || std::abs(probs->row(k).sum() - 1.0) > 1e-12)
        throw ValidationError("probability row " + std::to_string(k) + " is off the simplex");
    }
    out.probs = *probs;
  } else {
    out.probs = Eigen::MatrixXd::Zero(K, L);
    for (std::size_t i = 0; i < counts.rows(); ++i)
      for (int l = 0; l < L; ++l)
        out.probs(counts.groups[i], l) += static_cast<double>(counts.at(i, l));
    for (int k = 0; k < K; ++k)
      if (group_total(k) > 0.0) out.probs.row(k) /= group_total(k);
  }
  for (int k = 0; k < K; ++k) out.skipped_groups[k] = !(group_total(k) > 0.0);

  // Row terms are summed in sorted order so relabeling categories gives a bit-identical Y.
  double y = 0.0;
  std::vector<double> terms(static_cast<std::size_t>(L));
  for (std::size_t i = 0; i < counts.rows(); ++i) {
    const int k = counts.groups[i];
    const double di = static_cast<double>(counts.d[i]);
    if (counts.d[i] == 0) {
      if (counting == RowCounting::AllRows) ++out.n_effective;
      continue;
    }
    ++out.n_effective;
    for (int l = 0; l < L; ++l) terms[l] = psi(static_cast<double>(counts.at(i, l)), di * out.probs(k, l));
    std::sort(terms.begin(), terms.end());
    double row = 0.0;
    for (double t : terms) row += t;
    y += row;
  }
  out.y_stat = y;
  return out;
}

double ac_adjust(double y, std::size_t n_effective, int L) {
  if (L < 2) throw ValidationError("AC undefined for one category");
  if (n_effective < 1) throw ValidationError("AC needs at least one row");
  const double gamma = std::sqrt(static_cast<double>(n_effective) * (L - 1));
  return (y / gamma - gamma) / std::sqrt(2.0);
}

double harmonic_mean(std::span<const double> d) {
  if (d.empty()) throw ValidationError("harmonic mean of an empty sequence");
  double s = 0.0;
  for (double x : d) {
    if (!(x > 0.0)) throw ValidationError("harmonic mean needs positive entries");
    s += 1.0 / x;
  }
  return static_cast<double>(d.size()) / s;
}

double group_omega(const CompressedCounts& counts, RowCounting counting) {
  std::vector<double> size(static_cast<std::size_t>(counts.K), 0.0), total(size);
  double n = 0.0;
  for (std::size_t i = 0; i < counts.rows(); ++i) {
    if (counting == RowCounting::PositiveDegree && counts.d[i] == 0) continue;
    size[counts.groups[i]] += 1.0;
    total[counts.groups[i]] += static_cast<double>(counts.d[i]);
    n += 1.0;
  }
  if (n == 0.0) throw ValidationError("omega needs at least one row");
  double omega = std::numeric_limits<double>::infinity();
  for (int k = 0; k < counts.K; ++k)
    if (size[k] > 0.0) omega = std::min(omega, (size[k] / n) * (total[k] / size[k]));
  return omega;
}

AcResult ac_statistic(const CompressedCounts& counts, RowCounting counting) {
  auto chi = chi_square_groups(counts, nullptr, counting);
  AcResult r;
  r.y_stat = chi.y_stat;
  r.n_effective = chi.n_effective;
  r.t_stat = ac_adjust(chi.y_stat, chi.n_effective, counts.L);
  r.gamma = std::sqrt(static_cast<double>(chi.n_effective) * (counts.L - 1));
  std::vector<double> pos;
  pos.reserve(counts.rows());
  for (auto di : counts.d)
    if (di > 0) pos.push_back(static_cast<double>(di));
  r.harmonic_mean_d = pos.empty() ? 0.0 : harmonic_mean(pos);
  r.omega_n = group_omega(counts, counting);
  return r;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double normal_p_value(double t, bool two_sided) {
  if (two_sided) return std::erfc(std::abs(t) / std::sqrt(2.0));
  return 0.5 * std::erfc(t / std::sqrt(2.0));
}

double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) throw ValidationError("normal quantile needs p in (0, 1)");
  return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

double ks_distance(std::vector<double> samples, const std::function<double(double)>& cdf) {
  if (samples.empty()) throw ValidationError("KS distance of an empty sample");
  std::sort(samples.begin(), samples.end());
  const double m = static_cast<double>(samples.size());
  double dist = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    double F = cdf(samples[i]);
    dist = std::max({dist, static_cast<double>(i + 1) / m - F, F - static_cast<double>(i) / m});
  }
  return dist;
}

void sample_multinomial(std::int64_t d, std::span<const double> p, Rng& rng,
                        std::span<std::int64_t> out) {
  double rest = 1.0;
  std::int64_t left = d;
  for (std::size_t l = 0; l < p.size(); ++l) {
    if (l + 1 == p.size() || left == 0) {
      out[l] = left;
      for (std::size_t r = l + 1; r < p.size(); ++r) out[r] = 0;
      return;
    }
    double q = rest > 0.0 ? std::clamp(p[l] / rest, 0.0, 1.0) : 0.0;
    out[l] = std::binomial_distribution<std::int64_t>(left, q)(rng);
    left -= out[l];
    rest -= p[l];
  }
}

std::vector<double> simulate_null_t(int L, std::span<const std::int64_t> d, std::span<const double> p,
                                    int reps, Rng& rng, std::vector<double>* y_out) {
  if (L < 2) throw ValidationError("null simulation needs L >= 2");
  std::vector<double> prob(p.begin(), p.end());
  if (prob.empty()) prob.assign(static_cast<std::size_t>(L), 1.0 / L);
  if (prob.size() != static_cast<std::size_t>(L)) throw ValidationError("p must have length L");
  CompressedCounts c(d.size(), L, 1);
  std::vector<double> t;
  t.reserve(static_cast<std::size_t>(reps));
  if (y_out) y_out->clear();
  for (int r = 0; r < reps; ++r) {
    for (std::size_t i = 0; i < d.size(); ++i) {
      c.d[i] = d[i];
      sample_multinomial(d[i], prob, rng, {c.X.data() + i * L, static_cast<std::size_t>(L)});
    }
    auto chi = chi_square_groups(c);
    t.push_back(ac_adjust(chi.y_stat, chi.n_effective, L));
    if (y_out) y_out->push_back(chi.y_stat);
  }
  return t;
}

double chi_square_null_reference(int L, std::span<const std::int64_t> d, std::span<const double> p,
                                 int reps, Rng& rng) {
  if (reps < 100) throw ValidationError("null reference needs reps >= 100");
  return ks_distance(simulate_null_t(L, d, p, reps, rng), normal_cdf);
}

}  // namespace nacgof
