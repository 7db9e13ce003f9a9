/*
 * SPDX-FileCopyrightText: Copyright (c) 2026, nacgof contributors.
 * SPDX-License-Identifier: Apache-2.0
 */

#include "nacgof/nac.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numeric>

#include "nacgof/baselines.hpp"
#include "nacgof/error.hpp"
#include "nacgof/sbm.hpp"

namespace nacgof {

std::string method_name(Method m) {
  switch (m) {
    case Method::NAC: return "NAC";
    case Method::NACPlus: return "NAC+";
    case Method::SNAC: return "SNAC";
    case Method::SNACPlus: return "SNAC+";
    case Method::AS: return "AS";
    case Method::ASSBM: return "AS-SBM";
    case Method::LR: return "LR";
    case Method::BIC: return "BIC";
  }
  return "?";
}

Method parse_method(const std::string& name) {
  std::string s = name;
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::toupper(c); });
  for (Method m : {Method::NAC, Method::NACPlus, Method::SNAC, Method::SNACPlus, Method::AS,
                   Method::ASSBM, Method::LR, Method::BIC})
    if (method_name(m) == s) return m;
  throw ValidationError("unknown method '" + name + "'");
}

CompressedCounts column_compress(const SparseGraph& g, std::span<const NodeId> rows,
                                 std::span<const NodeId> cols, std::span<const int> col_labels,
                                 int L, std::span<const int> row_groups, int K) {
  if (col_labels.size() != cols.size()) throw ValidationError("column labels must align with cols");
  if (!row_groups.empty() && row_groups.size() != rows.size())
    throw ValidationError("row groups must align with rows");
  std::vector<int> label_of(static_cast<std::size_t>(g.n()), -1);
  for (std::size_t c = 0; c < cols.size(); ++c) {
    if (col_labels[c] < 0 || col_labels[c] >= L) throw ValidationError("column label out of range");
    label_of[cols[c]] = col_labels[c];
  }
  CompressedCounts out(rows.size(), L, K);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    auto nb = g.neighbors(rows[r]);
    auto w = g.weights(rows[r]);
    std::int64_t total = 0;
    for (std::size_t p = 0; p < nb.size(); ++p) {
      int l = label_of[nb[p]];
      if (l < 0) continue;
      out.at(r, l) += w[p];
      total += w[p];
    }
    out.d[r] = total;
    out.groups[r] = row_groups.empty() ? 0 : row_groups[r];
  }
  return out;
}

RhoHat rho_hat(const CompressedCounts& counts) {
  RhoHat r;
  r.rho = Eigen::MatrixXd::Zero(counts.K, counts.L);
  r.group_degree.assign(static_cast<std::size_t>(counts.K), 0.0);
  for (std::size_t i = 0; i < counts.rows(); ++i) {
    r.group_degree[counts.groups[i]] += static_cast<double>(counts.d[i]);
    for (int l = 0; l < counts.L; ++l) r.rho(counts.groups[i], l) += static_cast<double>(counts.at(i, l));
  }
  r.degenerate.assign(static_cast<std::size_t>(counts.K), false);
  for (int k = 0; k < counts.K; ++k) {
    if (r.group_degree[k] > 0.0) r.rho.row(k) /= r.group_degree[k];
    else r.degenerate[k] = true;
  }
  return r;
}

AcResult nac_statistic(const SparseGraph& g, std::span<const NodeId> rows, std::span<const int> zhat,
                       int K, std::span<const NodeId> cols, std::span<const int> yhat, int L,
                       RowCounting counting) {
  if (zhat.size() != static_cast<std::size_t>(g.n())) throw ValidationError("zhat must cover all nodes");
  std::vector<int> groups(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) groups[r] = zhat[rows[r]];
  auto counts = column_compress(g, rows, cols, yhat, L, groups, K);
  return ac_statistic(counts, counting);
}

namespace {

void fill_ac_metadata(TestOutcome& out, const AcResult& ac) {
  out.metadata["n_effective"] = ac.n_effective;
  out.metadata["omega_n"] = ac.omega_n;
  out.metadata["harmonic_mean_d"] = ac.harmonic_mean_d;
  out.metadata["y_stat"] = ac.y_stat;
  out.metadata["gamma"] = ac.gamma;
}

void fill_cluster_metadata(TestOutcome& out, const ClusterOptions& c) {
  out.metadata["tau"] = c.tau;
  out.metadata["min_frac"] = c.min_frac;
  out.metadata["restarts"] = c.restarts;
  out.metadata["spherical"] = c.spherical;
}

void require_categories(int L, Variant variant) {
  if (L >= 2) return;
  if (variant == Variant::Plain)
    throw ValidationError("AC undefined for one category: NAC/SNAC with K = 1 has L = 1; use NAC+/SNAC+");
  throw ValidationError("AC undefined for one category: column clustering returned a single community");
}

}  // namespace

TestOutcome nac_full(LabelCache& labels, int K, Variant variant, const NacOptions& opts) {
  if (K < 1) throw ValidationError("K must be >= 1");
  const SparseGraph& g = labels.graph();
  if (variant == Variant::Plain && K < 2) require_categories(1, variant);
  const LabelVector& z = labels.labels(K);
  const LabelVector& y = variant == Variant::Plus ? labels.labels(K + 1) : z;
  require_categories(y.K, variant);

  std::vector<NodeId> all(static_cast<std::size_t>(g.n()));
  std::iota(all.begin(), all.end(), 0);
  auto ac = nac_statistic(g, all, z.labels, z.K, all, y.labels, y.K, opts.counting);

  TestOutcome out;
  out.method = variant == Variant::Plus ? Method::NACPlus : Method::NAC;
  out.K = K;
  out.L = y.K;
  out.statistic = ac.t_stat;
  out.seed = labels.seed();
  fill_ac_metadata(out, ac);
  fill_cluster_metadata(out, labels.options());
  out.metadata["K_effective"] = z.K;
  out.metadata["L_requested"] = y.requested_K;
  return out;
}

TestOutcome snac(LabelCache& labels, int K, Variant variant, std::uint64_t split_seed,
                 const NacOptions& opts) {
  if (K < 1) throw ValidationError("K must be >= 1");
  const SparseGraph& g = labels.graph();
  if (g.n() < 8) throw ValidationError("SNAC needs n >= 8");
  if (variant == Variant::Plain && K < 2) require_categories(1, variant);

  // Step 1: K communities on the whole network.
  const LabelVector& z = labels.labels(K);
  // Step 2: half split.
  NodeSplit split = random_split(g.n(), split_seed);
  // Step 3: L communities on A_{S1 S1}.
  const int L = variant == Variant::Plus ? K + 1 : K;
  if (static_cast<NodeId>(split.s1.size()) <= L)
    throw ValidationError("split side S1 too small to fit " + std::to_string(L) + " communities");
  LabelVector y = labels.fit_subgraph(split.s1, L, derive_seed(split_seed, static_cast<std::uint64_t>(L)));
  require_categories(y.K, variant);
  // Step 4: test on A_{S2 S1} with row labels zhat restricted to S2.
  auto ac = nac_statistic(g, split.s2, z.labels, z.K, split.s1, y.labels, y.K, opts.counting);

  std::vector<bool> seen(static_cast<std::size_t>(z.K), false);
  for (NodeId i : split.s2) seen[z.labels[i]] = true;
  int empty_groups = static_cast<int>(std::count(seen.begin(), seen.end(), false));

  TestOutcome out;
  out.method = variant == Variant::Plus ? Method::SNACPlus : Method::SNAC;
  out.K = K;
  out.L = y.K;
  out.statistic = ac.t_stat;
  out.p_value = normal_p_value(ac.t_stat, opts.two_sided);
  out.seed = labels.seed();
  out.split_seed = split_seed;
  fill_ac_metadata(out, ac);
  fill_cluster_metadata(out, labels.options());
  out.metadata["K_effective"] = z.K;
  out.metadata["L_requested"] = L;
  out.metadata["s1_size"] = split.s1.size();
  out.metadata["s2_size"] = split.s2.size();
  if (empty_groups > 0) out.metadata["skipped_row_groups"] = empty_groups;
  if (opts.keep_split) out.split = std::move(split);
  return out;
}

TestOutcome bootstrap_debias(LabelCache& labels, int K, const StatisticFn& base, std::uint64_t seed,
                             const BootstrapOptions& opts) {
  if (opts.reps < 2) throw ValidationError("bootstrap needs J >= 2 replicates");
  const SparseGraph& g = labels.graph();
  TestOutcome observed = base(g, seed);

  const LabelVector& z = labels.labels(K);
  BlockEstimates est = fit_block_estimates(g, z.labels, z.K);
  DcsbmParams sbm;
  sbm.K = z.K;
  sbm.B = est.B_hat;
  sbm.z = z.labels;
  sbm.theta.assign(static_cast<std::size_t>(g.n()), 1.0);
  sbm.dist = opts.poisson ? EdgeDist::Poisson : EdgeDist::Bernoulli;

  std::vector<double> reps;
  reps.reserve(static_cast<std::size_t>(opts.reps));
  for (int j = 0; j < opts.reps; ++j) {
    const std::uint64_t rep_seed = derive_seed(seed, 0xB0075000ULL + static_cast<std::uint64_t>(j));
    Rng rng = make_rng(rep_seed);
    SparseGraph Aj = sample_dcsbm(sbm, rng);
    reps.push_back(base(Aj, derive_seed(rep_seed, 1)).statistic);
  }
  const double J = static_cast<double>(reps.size());
  const double mu = std::accumulate(reps.begin(), reps.end(), 0.0) / J;
  double ss = 0.0;
  for (double r : reps) ss += (r - mu) * (r - mu);
  const double sd = std::sqrt(ss / (J - 1.0));
  if (!(sd > 0.0) || !std::isfinite(sd)) throw NumericalError("degenerate bootstrap spread");

  TestOutcome out = observed;
  out.debiased = true;
  out.statistic = (observed.statistic - mu) / sd;
  out.p_value = normal_p_value(out.statistic, opts.two_sided);
  out.metadata["raw_statistic"] = observed.statistic;
  out.metadata["boot_mean"] = mu;
  out.metadata["boot_sd"] = sd;
  out.metadata["boot_reps"] = opts.reps;
  out.metadata["boot_dist"] = opts.poisson ? "poisson" : "bernoulli";
  return out;
}

}  // namespace nacgof
