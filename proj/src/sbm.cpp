/*
 * SPDX-FileCopyrightText: Copyright (c) 2026, nacgof contributors.
 * SPDX-License-Identifier: Apache-2.0
 */

#include "nacgof/sbm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nacgof/error.hpp"

namespace nacgof {

Eigen::MatrixXd make_connectivity(ConnectivityKind kind, int K, const ConnectivityParams& params,
                                  Rng& rng) {
  if (K < 1) throw ValidationError("connectivity needs K >= 1");
  Eigen::MatrixXd B(K, K);
  switch (kind) {
    case ConnectivityKind::B1:
    case ConnectivityKind::B3: {
      if (!(params.beta > 0.0 && params.beta < 1.0))
        throw ValidationError("out-in ratio beta must lie in (0, 1)");
      std::vector<double> w(static_cast<std::size_t>(K), 1.0);
      if (kind == ConnectivityKind::B3) {
        if (params.w.size() != static_cast<std::size_t>(K))
          throw ValidationError("B3 needs a weight vector of length K");
        for (double x : params.w)
          if (!(x > 0.0)) throw ValidationError("B3 weights must be positive");
        w = params.w;
      }
      B.setConstant(params.beta);
      for (int k = 0; k < K; ++k) B(k, k) += (1.0 - params.beta) * w[k];
      break;
    }
    case ConnectivityKind::B2: {
      if (!(params.gamma > 0.0 && params.gamma <= 1.0))
        throw ValidationError("gamma must lie in (0, 1]");
      // Symmetric permutation = involution: shuffle, then swap consecutive pairs.
      std::vector<int> perm(static_cast<std::size_t>(K));
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), rng);
      Eigen::MatrixXd R = Eigen::MatrixXd::Zero(K, K);
      int k = 0;
      for (; k + 1 < K; k += 2) {
        R(perm[k], perm[k + 1]) = 1.0;
        R(perm[k + 1], perm[k]) = 1.0;
      }
      if (k < K) R(perm[k], perm[k]) = 1.0;
      Eigen::MatrixXd Q(K, K);
      for (int i = 0; i < K; ++i)
        for (int j = i; j < K; ++j) Q(i, j) = Q(j, i) = uniform_open(rng);
      B = params.gamma * R + (1.0 - params.gamma) * Q;
      break;
    }
  }
  return B;
}

double expected_average_degree(const Eigen::MatrixXd& B, std::span<const int> z,
                               std::span<const double> theta) {
  const int K = static_cast<int>(B.rows());
  if (z.size() != theta.size() || z.empty())
    throw ValidationError("labels and theta must have equal, positive length");
  Eigen::VectorXd S = Eigen::VectorXd::Zero(K);
  double diag = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (z[i] < 0 || z[i] >= K) throw ValidationError("label out of range");
    S(z[i]) += theta[i];
    diag += theta[i] * theta[i] * B(z[i], z[i]);
  }
  return (S.dot(B * S) - diag) / static_cast<double>(z.size());
}

Eigen::MatrixXd scale_to_expected_degree(const Eigen::MatrixXd& B0, std::span<const int> z,
                                         std::span<const double> theta, double lambda) {
  if (!(lambda > 0.0)) throw ValidationError("target degree lambda must be positive");
  for (double t : theta)
    if (!(t > 0.0)) throw ValidationError("degenerate theta: entries must be positive");
  double base = expected_average_degree(B0, z, theta);
  if (!(base > 0.0)) throw ValidationError("connectivity yields zero expected degree");
  return (lambda / base) * B0;
}

std::vector<int> sample_labels(int n, std::span<const double> prior, Rng& rng) {
  if (n < 1 || prior.empty()) throw ValidationError("sample_labels needs n >= 1 and K >= 1");
  for (double p : prior)
    if (!(p >= 0.0)) throw ValidationError("prior entries must be nonnegative");
  const int K = static_cast<int>(prior.size());
  std::discrete_distribution<int> pick(prior.begin(), prior.end());
  for (int attempt = 0; attempt <= 16; ++attempt) {
    std::vector<int> z(static_cast<std::size_t>(n));
    std::vector<int> used(static_cast<std::size_t>(K), 0);
    for (int& x : z) used[x = pick(rng)] = 1;
    if (std::all_of(used.begin(), used.end(), [](int u) { return u != 0; })) return z;
  }
  throw ValidationError("sample_labels: some community stayed empty after 16 resamples");
}

std::vector<double> sample_pareto_theta(int n, double x0, double alpha, Rng& rng) {
  if (!(x0 > 0.0) || !(alpha > 0.0)) throw ValidationError("Pareto needs x0 > 0, alpha > 0");
  std::vector<double> theta(static_cast<std::size_t>(n));
  for (double& t : theta) t = x0 * std::pow(uniform_open(rng), -1.0 / alpha);
  return theta;
}

void DcsbmParams::validate() const {
  if (K < 1) throw ValidationError("DCSBM needs K >= 1");
  if (B.rows() != K || B.cols() != K) throw ValidationError("B must be K x K");
  for (int i = 0; i < K; ++i)
    for (int j = 0; j < K; ++j) {
      if (!(B(i, j) >= 0.0)) throw ValidationError("B entries must be nonnegative");
      if (B(i, j) != B(j, i)) throw ValidationError("B must be symmetric");
    }
  if (z.size() != theta.size()) throw ValidationError("labels and theta lengths differ");
  std::vector<int> used(static_cast<std::size_t>(K), 0);
  for (int k : z) {
    if (k < 0 || k >= K) throw ValidationError("label out of range");
    used[k] = 1;
  }
  if (std::find(used.begin(), used.end(), 0) != used.end())
    throw ValidationError("every community label must be used");
  for (double t : theta)
    if (!(t > 0.0)) throw ValidationError("theta entries must be positive");
}

namespace {

int poisson_draw(double mean, Rng& rng) {
  if (mean <= 0.0) return 0;
  return std::poisson_distribution<int>(mean)(rng);
}

}  // namespace

SparseGraph sample_dcsbm(const DcsbmParams& params, Rng& rng, SamplerStats* stats) {
  params.validate();
  const int K = params.K;
  const auto n = static_cast<NodeId>(params.z.size());
  std::vector<std::vector<NodeId>> members(static_cast<std::size_t>(K));
  for (NodeId i = 0; i < n; ++i) members[params.z[i]].push_back(i);

  std::vector<double> sum(K, 0.0), sum_sq(K, 0.0), tmax(K, 0.0);
  std::vector<std::discrete_distribution<std::size_t>> within;
  for (int k = 0; k < K; ++k) {
    std::vector<double> w;
    w.reserve(members[k].size());
    for (NodeId i : members[k]) {
      double t = params.theta[i];
      w.push_back(t);
      sum[k] += t;
      sum_sq[k] += t * t;
      tmax[k] = std::max(tmax[k], t);
    }
    within.emplace_back(w.begin(), w.end());
  }

  SamplerStats local;
  std::vector<Edge> edges;
  std::vector<std::pair<NodeId, NodeId>> cand;
  for (int k = 0; k < K; ++k) {
    for (int l = k; l < K; ++l) {
      const double b = params.B(k, l);
      if (b <= 0.0) continue;
      const double block_mean =
          k == l ? 0.5 * b * (sum[k] * sum[k] - sum_sq[k]) : b * sum[k] * sum[l];
      const double max_mean = b * tmax[k] * tmax[l];
      const auto& mk = members[k];
      const auto& ml = members[l];

      if (params.dist == EdgeDist::Bernoulli && max_mean > 0.5) {
        // Dense fallback: exact Bernoulli with clipping.
        ++local.dense_blocks;
        for (std::size_t a = 0; a < mk.size(); ++a) {
          for (std::size_t c = (k == l ? a + 1 : 0); c < ml.size(); ++c) {
            double p = b * params.theta[mk[a]] * params.theta[ml[c]];
            if (p >= 1.0) {
              ++local.clipped_pairs;
              edges.push_back({mk[a], ml[c], 1});
            } else if (uniform_open(rng) < p) {
              edges.push_back({mk[a], ml[c], 1});
            }
          }
        }
        continue;
      }

      // Poissonization: the number of (ordered-by-block) draws is Poisson with the block's
      // total mean; each draw lands on pair (i, j) with probability proportional to
      // theta_i theta_j, rejecting i == j inside diagonal blocks.
      double inflate = 1.0;
      if (params.dist == EdgeDist::Bernoulli) inflate = -std::log1p(-max_mean) / max_mean;
      const std::int64_t draws = std::poisson_distribution<std::int64_t>(
          inflate * block_mean)(rng);
      cand.clear();
      cand.reserve(static_cast<std::size_t>(draws));
      for (std::int64_t t = 0; t < draws; ++t) {
        NodeId i, j;
        do {
          i = mk[within[k](rng)];
          j = ml[within[l](rng)];
        } while (i == j);
        if (i > j) std::swap(i, j);
        cand.emplace_back(i, j);
      }
      if (params.dist == EdgeDist::Poisson) {
        for (auto [i, j] : cand) edges.push_back({i, j, 1});
        continue;
      }
      // Thinning: a pair appears with probability 1 - exp(-inflate * mu) >= mu; keep it
      // with probability mu / (1 - exp(-inflate * mu)).
      std::sort(cand.begin(), cand.end());
      cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
      for (auto [i, j] : cand) {
        double mu = b * params.theta[i] * params.theta[j];
        double keep = mu / -std::expm1(-inflate * mu);
        if (uniform_open(rng) < keep) edges.push_back({i, j, 1});
      }
    }
  }
  if (stats) *stats = local;
  return SparseGraph::from_edges(n, edges);
}

SparseGraph sample_dcsbm_dense(const DcsbmParams& params, Rng& rng) {
  params.validate();
  const auto n = static_cast<NodeId>(params.z.size());
  std::vector<Edge> edges;
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = i + 1; j < n; ++j) {
      double mu = params.theta[i] * params.theta[j] * params.B(params.z[i], params.z[j]);
      if (params.dist == EdgeDist::Poisson) {
        int a = poisson_draw(mu, rng);
        if (a > 0) edges.push_back({i, j, a});
      } else if (uniform_open(rng) < std::min(mu, 1.0)) {
        edges.push_back({i, j, 1});
      }
    }
  }
  return SparseGraph::from_edges(n, edges);
}

DclvmSample sample_dclvm(const DclvmParams& params, double lambda, Rng& rng) {
  if (!(lambda > 0.0)) throw ValidationError("target degree lambda must be positive");
  const int d = params.latent_dim();
  const auto n = static_cast<NodeId>(params.z.size());
  if (d < 1 || params.theta.size() != params.z.size() || n < 2)
    throw ValidationError("DCLVM needs K >= 1, n >= 2 and matching label/theta lengths");
  for (int k : params.z)
    if (k < 0 || k >= d) throw ValidationError("label out of range");
  for (double t : params.theta)
    if (!(t > 0.0)) throw ValidationError("theta entries must be positive");

  DclvmSample out;
  std::normal_distribution<double> gauss;
  out.latent.resize(n, d);
  for (NodeId i = 0; i < n; ++i) {
    for (int c = 0; c < d; ++c) out.latent(i, c) = gauss(rng);
    out.latent(i, params.z[i]) += 2.0;
  }

  // Kernel row by row; stored upper triangle would be n^2 / 2 doubles, so compute twice.
  auto kernel_row = [&](NodeId i, std::vector<double>& row) {
    row.resize(static_cast<std::size_t>(n));
    for (NodeId j = i + 1; j < n; ++j)
      row[j] = params.theta[i] * params.theta[j] *
               std::exp(-(out.latent.row(i) - out.latent.row(j)).squaredNorm());
  };
  std::vector<double> row;
  double total = 0.0;
  for (NodeId i = 0; i < n; ++i) {
    kernel_row(i, row);
    for (NodeId j = i + 1; j < n; ++j) total += row[j];
  }
  out.scale = lambda * n / (2.0 * total);

  std::vector<Edge> edges;
  std::size_t clipped = 0;
  for (NodeId i = 0; i < n; ++i) {
    kernel_row(i, row);
    for (NodeId j = i + 1; j < n; ++j) {
      double p = out.scale * row[j];
      if (p >= 1.0) {
        ++clipped;
        edges.push_back({i, j, 1});
      } else if (uniform_open(rng) < p) {
        edges.push_back({i, j, 1});
      }
    }
  }
  out.clip_fraction = static_cast<double>(clipped) / (0.5 * n * (n - 1.0));
  out.clip_warning = out.clip_fraction > 0.10;
  out.graph = SparseGraph::from_edges(n, edges);
  return out;
}

}  // namespace nacgof
