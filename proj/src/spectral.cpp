/*
 * SPDX-FileCopyrightText: Copyright (c) 2026, nacgof contributors.
 * SPDX-License-Identifier: Apache-2.0
 */

#include "nacgof/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "nacgof/error.hpp"

namespace nacgof {

namespace {

// Indices of the k wanted eigenvalues, in descending order of value.
std::vector<int> select_wanted(const Eigen::VectorXd& vals, int k, EigenTarget target) {
  std::vector<int> idx(static_cast<std::size_t>(vals.size()));
  std::iota(idx.begin(), idx.end(), 0);
  auto score = [&](int i) {
    return target == EigenTarget::LargestMagnitude ? std::abs(vals(i)) : vals(i);
  };
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return score(a) > score(b); });
  idx.resize(static_cast<std::size_t>(k));
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return vals(a) > vals(b); });
  return idx;
}

// Orthogonalizes v against the first `cols` columns of V (two Gram-Schmidt passes) and
// returns its remaining norm.
double orthogonalize(const Eigen::MatrixXd& V, int cols, Eigen::VectorXd& v) {
  for (int pass = 0; pass < 2; ++pass) {
    if (cols == 0) break;
    Eigen::VectorXd h = V.leftCols(cols).transpose() * v;
    v.noalias() -= V.leftCols(cols) * h;
  }
  return v.norm();
}

EigenResult dense_eigs(NodeId n, int k, const SymmetricOperator& op, EigenTarget target) {
  Eigen::MatrixXd M(n, n);
  Eigen::VectorXd e = Eigen::VectorXd::Zero(n), y(n);
  for (NodeId j = 0; j < n; ++j) {
    e(j) = 1.0;
    op(e, y);
    M.col(j) = y;
    e(j) = 0.0;
  }
  M = 0.5 * (M + M.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(M);
  auto idx = select_wanted(es.eigenvalues(), k, target);
  EigenResult out;
  out.dense = true;
  out.iterations = n;
  out.vectors.resize(n, k);
  out.values.resize(k);
  out.residuals.resize(k);
  for (int c = 0; c < k; ++c) {
    out.values(c) = es.eigenvalues()(idx[c]);
    out.vectors.col(c) = es.eigenvectors().col(idx[c]);
    out.residuals(c) = (M * out.vectors.col(c) - out.values(c) * out.vectors.col(c)).norm();
  }
  return out;
}

}  // namespace

EigenResult symmetric_eigs(NodeId n, int k, const SymmetricOperator& op,
                           const EigenSolverOptions& opts) {
  if (k < 1 || k > n) throw ValidationError("eigensolver needs 1 <= k <= n");
  if (n <= opts.dense_threshold) return dense_eigs(n, k, op, opts.target);

  const int m = std::min<int>(n, opts.krylov_dim > 0 ? opts.krylov_dim : std::max(2 * k + 30, 60));
  const int keep = std::min(m - 1, k + std::max(k, 10));
  if (m <= k) return dense_eigs(n, k, op, opts.target);

  Eigen::MatrixXd V(n, m), AV(n, m);
  Rng rng = make_rng(0x6e61636766ULL);
  std::normal_distribution<double> gauss;
  auto random_vector = [&] {
    Eigen::VectorXd v(n);
    for (NodeId i = 0; i < n; ++i) v(i) = gauss(rng);
    return v;
  };

  Eigen::VectorXd next = random_vector();
  Eigen::VectorXd y(n);
  int cols = 0;
  int iters = 0;
  for (;;) {
    while (cols < m) {
      double nrm = orthogonalize(V, cols, next);
      // Invariant subspace found: continue with a fresh random direction.
      for (int tries = 0; nrm < 1e-10 && tries < 5; ++tries) {
        next = random_vector();
        nrm = orthogonalize(V, cols, next);
      }
      next /= nrm;
      V.col(cols) = next;
      op(next, y);
      ++iters;
      AV.col(cols) = y;
      next = y;
      ++cols;
    }

    Eigen::MatrixXd H = V.transpose() * AV;
    H = 0.5 * (H + H.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
    auto wanted = select_wanted(es.eigenvalues(), keep, opts.target);
    // Reorder so the k targets come first (by target score), then the rest.
    auto primary = select_wanted(es.eigenvalues(), k, opts.target);
    std::vector<int> order = primary;
    for (int w : wanted)
      if (std::find(order.begin(), order.end(), w) == order.end()) order.push_back(w);

    Eigen::MatrixXd Y(m, keep);
    for (int c = 0; c < keep; ++c) Y.col(c) = es.eigenvectors().col(order[c]);
    Eigen::MatrixXd U = V * Y;
    Eigen::MatrixXd AU = AV * Y;

    Eigen::VectorXd res(k);
    double scale = 1.0;
    for (int c = 0; c < k; ++c) {
      double theta = es.eigenvalues()(order[c]);
      scale = std::max(scale, std::abs(theta));
      res(c) = (AU.col(c) - theta * U.col(c)).norm();
    }
    if (res.maxCoeff() <= opts.tol * scale) {
      EigenResult out;
      out.iterations = iters;
      out.vectors = U.leftCols(k);
      out.values.resize(k);
      for (int c = 0; c < k; ++c) out.values(c) = es.eigenvalues()(order[c]);
      out.residuals = res;
      return out;
    }
    if (iters >= opts.max_iters) {
      std::ostringstream msg;
      msg << "eigensolver did not converge after " << iters << " iterations; residuals:";
      for (int c = 0; c < k; ++c) msg << ' ' << res(c);
      throw NumericalError(msg.str());
    }

    // Krylov continuation: residual of the last expansion, orthogonal to span(V).
    Eigen::VectorXd f = AV.col(m - 1);
    orthogonalize(V, m, f);
    V.leftCols(keep) = U;
    AV.leftCols(keep) = AU;
    cols = keep;
    next = f;
  }
}

RegularizedLaplacian::RegularizedLaplacian(const SparseGraph& g, double tau) : g_(&g) {
  if (!(tau >= 0.0)) throw ValidationError("tau must be nonnegative");
  const NodeId n = g.n();
  auto d = g.degrees();
  double dbar = n > 0 ? static_cast<double>(std::accumulate(d.begin(), d.end(), std::int64_t{0})) / n
                      : 0.0;
  shift_ = n > 0 ? tau * dbar / n : 0.0;
  deg_.resize(n);
  inv_sqrt_.resize(n);
  for (NodeId i = 0; i < n; ++i) {
    deg_(i) = static_cast<double>(d[i]) + n * shift_;
    inv_sqrt_(i) = deg_(i) > 0.0 ? 1.0 / std::sqrt(deg_(i)) : 0.0;
  }
}

void RegularizedLaplacian::apply(const Eigen::VectorXd& x, Eigen::VectorXd& y) const {
  const NodeId n = g_->n();
  Eigen::VectorXd u = inv_sqrt_.cwiseProduct(x);
  double rank_one = shift_ * u.sum();
  y.resize(n);
  const auto& rp = g_->row_ptr();
  const auto& ci = g_->col_index();
  const auto& va = g_->values();
  for (NodeId i = 0; i < n; ++i) {
    double s = rank_one;
    for (std::int64_t p = rp[i]; p < rp[i + 1]; ++p) s += va[p] * u(ci[p]);
    y(i) = inv_sqrt_(i) * s;
  }
}

Eigen::MatrixXd RegularizedLaplacian::dense() const {
  const NodeId n = g_->n();
  Eigen::MatrixXd A = Eigen::MatrixXd::Constant(n, n, shift_);
  for (NodeId i = 0; i < n; ++i) {
    auto nb = g_->neighbors(i);
    auto w = g_->weights(i);
    for (std::size_t p = 0; p < nb.size(); ++p) A(i, nb[p]) += w[p];
  }
  return inv_sqrt_.asDiagonal() * A * inv_sqrt_.asDiagonal();
}

SpectralEmbedding spectral_embed(const SparseGraph& g, int K, double tau,
                                 const EigenSolverOptions& opts) {
  if (K < 1 || K > g.n() - 1)
    throw ValidationError("spectral embedding needs 1 <= K <= n - 1 (K = " + std::to_string(K) +
                          ", n = " + std::to_string(g.n()) + ")");
  RegularizedLaplacian L(g, tau);
  auto res = symmetric_eigs(
      g.n(), K, [&](const Eigen::VectorXd& x, Eigen::VectorXd& y) { L.apply(x, y); }, opts);
  SpectralEmbedding emb;
  emb.vectors = std::move(res.vectors);
  emb.eigenvalues = std::move(res.values);
  emb.tau = tau;
  emb.solver_iters = res.iterations;
  return emb;
}

namespace {

struct LloydRun {
  std::vector<int> labels;
  Eigen::MatrixXd centroids;
  double objective = 0;
  std::vector<double> trace;
  int iterations = 0;
};

Eigen::MatrixXd plus_plus_seeds(const Eigen::MatrixXd& X, int K, Rng& rng) {
  const auto m = X.rows();
  Eigen::MatrixXd C(K, X.cols());
  std::uniform_int_distribution<Eigen::Index> first(0, m - 1);
  C.row(0) = X.row(first(rng));
  Eigen::VectorXd dist = (X.rowwise() - C.row(0)).rowwise().squaredNorm();
  for (int c = 1; c < K; ++c) {
    double total = dist.sum();
    Eigen::Index pick = 0;
    if (total > 0.0) {
      double u = uniform_open(rng) * total;
      double acc = 0.0;
      for (pick = 0; pick < m - 1; ++pick) {
        acc += dist(pick);
        if (acc >= u) break;
      }
    } else {
      pick = first(rng);
    }
    C.row(c) = X.row(pick);
    dist = dist.cwiseMin((X.rowwise() - C.row(c)).rowwise().squaredNorm());
  }
  return C;
}

LloydRun lloyd(const Eigen::MatrixXd& X, Eigen::MatrixXd C, int max_iters, double rel_tol) {
  const auto m = X.rows();
  const auto K = static_cast<int>(C.rows());
  LloydRun run;
  run.labels.assign(static_cast<std::size_t>(m), 0);
  Eigen::VectorXd best(m);
  double prev = std::numeric_limits<double>::infinity();
  for (int it = 0; it < max_iters; ++it) {
    // Assignment.
    for (Eigen::Index i = 0; i < m; ++i) {
      double bd = std::numeric_limits<double>::infinity();
      int bc = 0;
      for (int c = 0; c < K; ++c) {
        double dd = (X.row(i) - C.row(c)).squaredNorm();
        if (dd < bd) {
          bd = dd;
          bc = c;
        }
      }
      run.labels[i] = bc;
      best(i) = bd;
    }
    // Empty clusters take the point farthest from its current centroid.
    std::vector<Eigen::Index> count(static_cast<std::size_t>(K), 0);
    for (int l : run.labels) ++count[l];
    for (int c = 0; c < K; ++c) {
      if (count[c] > 0) continue;
      Eigen::Index far = -1;
      for (Eigen::Index i = 0; i < m; ++i)
        if (count[run.labels[i]] > 1 && (far < 0 || best(i) > best(far))) far = i;
      if (far < 0) continue;
      --count[run.labels[far]];
      run.labels[far] = c;
      ++count[c];
      best(far) = 0.0;
    }
    // Update.
    C.setZero();
    for (Eigen::Index i = 0; i < m; ++i) C.row(run.labels[i]) += X.row(i);
    for (int c = 0; c < K; ++c) C.row(c) /= static_cast<double>(count[c]);
    double obj = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) obj += (X.row(i) - C.row(run.labels[i])).squaredNorm();
    run.trace.push_back(obj);
    run.iterations = it + 1;
    run.objective = obj;
    if (prev - obj <= rel_tol * std::max(obj, 1e-300)) break;
    prev = obj;
  }
  run.centroids = std::move(C);
  return run;
}

}  // namespace

KmeansResult kmeans(const Eigen::MatrixXd& points, int K, int restarts, Rng& rng, int max_iters,
                    double rel_tol) {
  if (K < 1 || points.rows() < K) throw ValidationError("k-means needs 1 <= K <= number of points");
  restarts = std::max(restarts, 1);
  LloydRun winner;
  winner.objective = std::numeric_limits<double>::infinity();
  for (int r = 0; r < restarts; ++r) {
    auto run = lloyd(points, plus_plus_seeds(points, K, rng), max_iters, rel_tol);
    if (run.objective < winner.objective) winner = std::move(run);
  }
  KmeansResult out;
  out.labels = std::move(winner.labels);
  out.centroids = std::move(winner.centroids);
  out.objective = winner.objective;
  out.trace = std::move(winner.trace);
  out.iterations = winner.iterations;
  return out;
}

LabelVector cluster(const SparseGraph& g, int K, const ClusterOptions& opts, Rng& rng) {
  const NodeId n = g.n();
  LabelVector out;
  out.requested_K = K;
  out.node_index.resize(static_cast<std::size_t>(n));
  std::iota(out.node_index.begin(), out.node_index.end(), 0);
  if (K < 1) throw ValidationError("cluster needs K >= 1");
  if (K == 1) {
    out.labels.assign(static_cast<std::size_t>(n), 0);
    out.K = 1;
    return out;
  }
  auto emb = spectral_embed(g, K, opts.tau, opts.eig);
  Eigen::MatrixXd X = std::move(emb.vectors);
  if (opts.spherical) {
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
      double r = X.row(i).norm();
      if (r > 0.0) X.row(i) /= r;
    }
  }
  auto km = kmeans(X, K, opts.restarts, rng);

  // Stability: dissolve communities below min_frac * n / K.
  std::vector<std::size_t> size(static_cast<std::size_t>(K), 0);
  for (int l : km.labels) ++size[l];
  const double floor = opts.min_frac * static_cast<double>(n) / K;
  std::vector<int> survivors;
  for (int c = 0; c < K; ++c)
    if (static_cast<double>(size[c]) >= floor) survivors.push_back(c);
  if (survivors.empty()) {
    // Keep the largest community rather than dissolve everything.
    survivors.push_back(static_cast<int>(std::max_element(size.begin(), size.end()) - size.begin()));
  }
  std::vector<int> remap(static_cast<std::size_t>(K), -1);
  for (std::size_t s = 0; s < survivors.size(); ++s) remap[survivors[s]] = static_cast<int>(s);
  out.labels.resize(static_cast<std::size_t>(n));
  for (NodeId i = 0; i < n; ++i) {
    int c = km.labels[i];
    if (remap[c] < 0) {
      double bd = std::numeric_limits<double>::infinity();
      for (int s : survivors) {
        double dd = (X.row(i) - km.centroids.row(s)).squaredNorm();
        if (dd < bd) {
          bd = dd;
          c = s;
        }
      }
    }
    out.labels[i] = remap[c];
  }
  out.K = static_cast<int>(survivors.size());
  return out;
}

LabelCache::LabelCache(const SparseGraph& g, ClusterOptions opts, std::uint64_t seed)
    : g_(&g), opts_(std::move(opts)), seed_(seed) {}

const LabelVector& LabelCache::labels(int K) {
  {
    std::lock_guard lock(mu_);
    if (auto it = cache_.find(K); it != cache_.end()) return *it->second;
  }
  Rng rng = make_rng(derive_seed(seed_, static_cast<std::uint64_t>(K)));
  auto lv = std::make_unique<LabelVector>(cluster(*g_, K, opts_, rng));
  std::lock_guard lock(mu_);
  auto [it, inserted] = cache_.try_emplace(K, std::move(lv));
  return *it->second;
}

LabelVector LabelCache::fit_subgraph(std::span<const NodeId> nodes, int K,
                                     std::uint64_t seed) const {
  SparseGraph sub = g_->induced(nodes);
  Rng rng = make_rng(seed);
  LabelVector lv = cluster(sub, K, opts_, rng);
  lv.node_index.assign(nodes.begin(), nodes.end());
  return lv;
}

double best_permutation_agreement(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size() || a.empty()) throw ValidationError("label vectors must match in length");
  int K = 0;
  for (std::size_t i = 0; i < a.size(); ++i) K = std::max({K, a[i] + 1, b[i] + 1});
  Eigen::MatrixXd conf = Eigen::MatrixXd::Zero(K, K);
  for (std::size_t i = 0; i < a.size(); ++i) conf(a[i], b[i]) += 1.0;
  double best = 0.0;
  if (K <= 8) {
    std::vector<int> perm(static_cast<std::size_t>(K));
    std::iota(perm.begin(), perm.end(), 0);
    do {
      double s = 0.0;
      for (int k = 0; k < K; ++k) s += conf(k, perm[k]);
      best = std::max(best, s);
    } while (std::next_permutation(perm.begin(), perm.end()));
  } else {
    Eigen::MatrixXd c = conf;
    for (int step = 0; step < K; ++step) {
      Eigen::Index r = 0, col = 0;
      double v = c.maxCoeff(&r, &col);
      if (v <= 0.0) break;
      best += v;
      c.row(r).setConstant(-1.0);
      c.col(col).setConstant(-1.0);
    }
  }
  return best / static_cast<double>(a.size());
}

}  // namespace nacgof
