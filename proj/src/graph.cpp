/*
 * SPDX-FileCopyrightText: Copyright (c) 2026, nacgof contributors.
 * SPDX-License-Identifier: Apache-2.0
 */

#include "nacgof/graph.hpp"

#include <algorithm>
#include <cctype>
#include <climits>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "nacgof/error.hpp"

namespace nacgof {

SparseGraph SparseGraph::from_edges(NodeId n, std::span<const Edge> edges) {
  if (n < 0) throw ValidationError("negative node count");
  SparseGraph g;
  g.n_ = n;
  std::vector<std::int64_t> count(static_cast<std::size_t>(n) + 1, 0);
  for (const Edge& e : edges) {
    if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n)
      throw ValidationError("edge (" + std::to_string(e.u) + ", " + std::to_string(e.v) +
                            ") out of range for n = " + std::to_string(n));
    if (e.w < 0) throw ValidationError("negative edge weight");
    if (e.u == e.v) {
      ++g.dropped_loops_;
      continue;
    }
    if (e.w == 0) continue;
    ++count[e.u + 1];
    ++count[e.v + 1];
  }
  std::partial_sum(count.begin(), count.end(), count.begin());
  std::vector<NodeId> cols(static_cast<std::size_t>(count[n]));
  std::vector<Weight> vals(cols.size());
  std::vector<std::int64_t> fill(count.begin(), count.end() - 1);
  for (const Edge& e : edges) {
    if (e.u == e.v || e.w == 0) continue;
    cols[fill[e.u]] = e.v;
    vals[fill[e.u]++] = e.w;
    cols[fill[e.v]] = e.u;
    vals[fill[e.v]++] = e.w;
  }

  // Sort each row and merge duplicate columns in place.
  g.row_ptr_.assign(static_cast<std::size_t>(n) + 1, 0);
  std::vector<std::pair<NodeId, Weight>> row;
  std::int64_t out = 0;
  for (NodeId i = 0; i < n; ++i) {
    row.clear();
    for (std::int64_t p = count[i]; p < count[i + 1]; ++p) row.emplace_back(cols[p], vals[p]);
    std::sort(row.begin(), row.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t k = 0; k < row.size();) {
      NodeId c = row[k].first;
      std::int64_t w = 0;
      for (; k < row.size() && row[k].first == c; ++k) w += row[k].second;
      cols[out] = c;
      vals[out] = static_cast<Weight>(w);
      if (c > i) g.edge_sum_ += w;
      ++out;
    }
    g.row_ptr_[i + 1] = out;
  }
  cols.resize(out);
  vals.resize(out);
  g.cols_ = std::move(cols);
  g.vals_ = std::move(vals);
  return g;
}

Weight SparseGraph::at(NodeId i, NodeId j) const noexcept {
  auto nb = neighbors(i);
  auto it = std::lower_bound(nb.begin(), nb.end(), j);
  if (it == nb.end() || *it != j) return 0;
  return vals_[row_ptr_[i] + (it - nb.begin())];
}

std::int64_t SparseGraph::degree(NodeId i) const noexcept {
  std::int64_t s = 0;
  for (Weight w : weights(i)) s += w;
  return s;
}

std::vector<std::int64_t> SparseGraph::degrees() const {
  std::vector<std::int64_t> d(static_cast<std::size_t>(n_));
  for (NodeId i = 0; i < n_; ++i) d[i] = degree(i);
  return d;
}

bool SparseGraph::check_invariants() const {
  if (row_ptr_.size() != static_cast<std::size_t>(n_) + 1) return false;
  for (NodeId i = 0; i < n_; ++i) {
    auto nb = neighbors(i);
    auto w = weights(i);
    for (std::size_t k = 0; k < nb.size(); ++k) {
      if (nb[k] == i || w[k] <= 0) return false;
      if (k > 0 && nb[k - 1] >= nb[k]) return false;
      if (at(nb[k], i) != w[k]) return false;
    }
  }
  return true;
}

SparseGraph SparseGraph::induced(std::span<const NodeId> nodes) const {
  std::vector<NodeId> remap(static_cast<std::size_t>(n_), -1);
  for (std::size_t k = 0; k < nodes.size(); ++k) remap[nodes[k]] = static_cast<NodeId>(k);
  std::vector<Edge> edges;
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    NodeId i = nodes[k];
    auto nb = neighbors(i);
    auto w = weights(i);
    for (std::size_t p = 0; p < nb.size(); ++p) {
      NodeId j = remap[nb[p]];
      if (j > static_cast<NodeId>(k)) edges.push_back({static_cast<NodeId>(k), j, w[p]});
    }
  }
  return from_edges(static_cast<NodeId>(nodes.size()), edges);
}

std::vector<Edge> SparseGraph::edge_list() const {
  std::vector<Edge> out;
  out.reserve(static_cast<std::size_t>(edge_sum_));
  for (NodeId i = 0; i < n_; ++i) {
    auto nb = neighbors(i);
    auto w = weights(i);
    for (std::size_t p = 0; p < nb.size(); ++p)
      if (nb[p] > i) out.push_back({i, nb[p], w[p]});
  }
  return out;
}

namespace {

bool blank_or_comment(const std::string& line, char comment) {
  for (char c : line) {
    if (c == comment) return true;
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

// Directed entries are symmetrized or checked, then handed to from_edges.
SparseGraph assemble(std::vector<Edge>& entries, NodeId n, const LoadOptions& opts) {
  if (!opts.drop_self_loops) {
    for (const Edge& e : entries)
      if (e.u == e.v)
        throw ValidationError("self-loop at node " + std::to_string(e.u + opts.index_base) +
                              " (diagonal must be zero)");
  }
  if (opts.symmetrize) return SparseGraph::from_edges(n, entries);

  // Entries are directed; keep the upper triangle after checking A == A^T.
  auto key = [](const Edge& e) { return std::pair{e.u, e.v}; };
  std::vector<Edge> upper, lower;
  for (const Edge& e : entries) {
    if (e.u < e.v) upper.push_back(e);
    else if (e.u > e.v) lower.push_back({e.v, e.u, e.w});
  }
  auto merge = [&](std::vector<Edge>& v) {
    std::sort(v.begin(), v.end(), [&](const Edge& a, const Edge& b) { return key(a) < key(b); });
    std::vector<Edge> out;
    for (const Edge& e : v) {
      if (!out.empty() && key(out.back()) == key(e)) out.back().w += e.w;
      else out.push_back(e);
    }
    v = std::move(out);
  };
  merge(upper);
  merge(lower);
  bool same = upper.size() == lower.size();
  for (std::size_t k = 0; same && k < upper.size(); ++k)
    same = key(upper[k]) == key(lower[k]) && upper[k].w == lower[k].w;
  if (!same) throw ValidationError("adjacency is not symmetric (use symmetrize)");
  SparseGraph g = SparseGraph::from_edges(n, upper);
  return g;
}

Weight parse_weight(const std::string& tok, long lineno) {
  std::size_t pos = 0;
  long long w = 0;
  try {
    w = std::stoll(tok, &pos);
  } catch (const std::exception&) {
    throw ParseError("bad weight '" + tok + "'", lineno);
  }
  if (pos != tok.size()) throw ParseError("bad weight '" + tok + "'", lineno);
  if (w < 0) throw ValidationError("line " + std::to_string(lineno) + ": negative weight");
  return static_cast<Weight>(w);
}

NodeId parse_index(const std::string& tok, int base, long lineno) {
  std::size_t pos = 0;
  long long v = 0;
  try {
    v = std::stoll(tok, &pos);
  } catch (const std::exception&) {
    throw ParseError("bad node index '" + tok + "'", lineno);
  }
  if (pos != tok.size()) throw ParseError("bad node index '" + tok + "'", lineno);
  v -= base;
  if (v < 0) throw ParseError("node index below index base", lineno);
  if (v > INT32_MAX - 1) throw ParseError("node index too large", lineno);
  return static_cast<NodeId>(v);
}

SparseGraph load_edge_list(std::istream& in, const LoadOptions& opts) {
  std::vector<Edge> entries;
  std::string line;
  long lineno = 0;
  NodeId max_id = -1;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank_or_comment(line, '#')) continue;
    if (auto c = line.find('#'); c != std::string::npos) line.resize(c);
    std::istringstream ss(line);
    std::vector<std::string> tok;
    for (std::string t; ss >> t;) tok.push_back(t);
    if (tok.size() < 2 || tok.size() > 3)
      throw ParseError("expected 'u v [w]', got " + std::to_string(tok.size()) + " fields",
                       lineno);
    Edge e{parse_index(tok[0], opts.index_base, lineno),
           parse_index(tok[1], opts.index_base, lineno),
           tok.size() == 3 ? parse_weight(tok[2], lineno) : 1};
    max_id = std::max({max_id, e.u, e.v});
    entries.push_back(e);
  }
  NodeId n = opts.n > 0 ? opts.n : max_id + 1;
  if (max_id >= n)
    throw ValidationError("node index " + std::to_string(max_id + opts.index_base) +
                          " exceeds declared n = " + std::to_string(n));
  return assemble(entries, n, opts);
}

SparseGraph load_matrix_market(std::istream& in, const LoadOptions& opts) {
  std::string line;
  long lineno = 0;
  if (!std::getline(in, line)) throw ParseError("empty Matrix Market stream", 1);
  ++lineno;
  std::istringstream hs(line);
  std::string banner, object, layout, field, symmetry;
  hs >> banner >> object >> layout >> field >> symmetry;
  auto lower = [](std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
    return s;
  };
  if (banner != "%%MatrixMarket" || lower(object) != "matrix" || lower(layout) != "coordinate")
    throw ParseError("expected '%%MatrixMarket matrix coordinate' header", lineno);
  field = lower(field);
  symmetry = lower(symmetry);
  if (field != "pattern" && field != "integer")
    throw ParseError("unsupported field '" + field + "' (pattern or integer)", lineno);
  if (symmetry != "symmetric" && symmetry != "general")
    throw ParseError("unsupported symmetry '" + symmetry + "'", lineno);

  long long rows = -1, cols = -1, nnz = -1;
  while (std::getline(in, line)) {
    ++lineno;
    if (blank_or_comment(line, '%')) continue;
    std::istringstream ss(line);
    if (!(ss >> rows >> cols >> nnz)) throw ParseError("bad size line", lineno);
    break;
  }
  if (rows < 0) throw ParseError("missing size line", lineno);
  if (rows != cols) throw ValidationError("adjacency must be square");

  LoadOptions o = opts;
  o.index_base = 1;
  // Symmetric files store one triangle; each entry is one undirected pair.
  if (symmetry == "symmetric") o.symmetrize = true;
  std::vector<Edge> entries;
  entries.reserve(static_cast<std::size_t>(std::max(0LL, nnz)));
  while (std::getline(in, line)) {
    ++lineno;
    if (blank_or_comment(line, '%')) continue;
    std::istringstream ss(line);
    std::vector<std::string> tok;
    for (std::string t; ss >> t;) tok.push_back(t);
    std::size_t want = field == "pattern" ? 2 : 3;
    if (tok.size() != want) throw ParseError("expected " + std::to_string(want) + " fields", lineno);
    Edge e{parse_index(tok[0], 1, lineno), parse_index(tok[1], 1, lineno),
           want == 3 ? parse_weight(tok[2], lineno) : 1};
    if (e.u >= rows || e.v >= rows) throw ParseError("entry outside declared size", lineno);
    entries.push_back(e);
  }
  if (static_cast<long long>(entries.size()) != nnz)
    throw ParseError("declared " + std::to_string(nnz) + " entries, found " +
                         std::to_string(entries.size()),
                     lineno);
  return assemble(entries, static_cast<NodeId>(rows), o);
}

}  // namespace

SparseGraph load_graph(std::istream& in, const LoadOptions& opts) {
  if (opts.index_base != 0 && opts.index_base != 1)
    throw ValidationError("index base must be 0 or 1");
  return opts.format == GraphFormat::MatrixMarket ? load_matrix_market(in, opts)
                                                  : load_edge_list(in, opts);
}

SparseGraph load_graph_file(const std::string& path, const LoadOptions& opts) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open '" + path + "'");
  return load_graph(in, opts);
}

void write_edge_list(std::ostream& out, const SparseGraph& g, int index_base) {
  for (NodeId i = 0; i < g.n(); ++i) {
    auto nb = g.neighbors(i);
    auto w = g.weights(i);
    for (std::size_t p = 0; p < nb.size(); ++p) {
      if (nb[p] <= i) continue;
      out << i + index_base << ' ' << nb[p] + index_base;
      if (w[p] != 1) out << ' ' << w[p];
      out << '\n';
    }
  }
}

double nearest_rank_quantile(std::vector<std::int64_t> values, double q) {
  if (values.empty()) throw ValidationError("quantile of empty sequence");
  if (!(q > 0.0 && q <= 1.0)) throw ValidationError("quantile level must lie in (0, 1]");
  auto rank = static_cast<std::size_t>(std::ceil(q * static_cast<double>(values.size()) - 1e-12));
  rank = std::clamp<std::size_t>(rank, 1, values.size());
  std::nth_element(values.begin(), values.begin() + (rank - 1), values.end());
  return static_cast<double>(values[rank - 1]);
}

DegreeSummary degree_summary(const SparseGraph& g) {
  if (g.n() < 1) throw ValidationError("degree summary needs n >= 1");
  auto d = g.degrees();
  DegreeSummary s;
  s.n = g.n();
  auto [lo, hi] = std::minmax_element(d.begin(), d.end());
  s.min = static_cast<double>(*lo);
  s.max = static_cast<double>(*hi);
  s.mean = static_cast<double>(std::accumulate(d.begin(), d.end(), std::int64_t{0})) /
           static_cast<double>(d.size());
  s.q1 = nearest_rank_quantile(d, 0.25);
  s.median = nearest_rank_quantile(d, 0.5);
  s.q3 = nearest_rank_quantile(d, 0.75);
  return s;
}

SparseGraph reduce_by_degree_quantile(const SparseGraph& g, double q, std::vector<NodeId>* kept) {
  if (!(q > 0.0 && q <= 1.0)) throw ValidationError("reduction level q must lie in (0, 1]");
  auto d = g.degrees();
  double cut = nearest_rank_quantile(d, q);
  std::vector<NodeId> nodes;
  for (NodeId i = 0; i < g.n(); ++i)
    if (static_cast<double>(d[i]) < cut) nodes.push_back(i);
  if (nodes.empty()) throw ValidationError("empty reduction");
  if (kept) *kept = nodes;
  return g.induced(nodes);
}

NodeSplit random_split(NodeId n, std::uint64_t seed) {
  if (n < 2) throw ValidationError("random split needs n >= 2");
  Rng rng = make_rng(seed);
  for (int attempt = 0; attempt <= 16; ++attempt) {
    NodeSplit sp;
    sp.seed = seed;
    for (NodeId i = 0; i < n; ++i) ((rng() >> 63) ? sp.s1 : sp.s2).push_back(i);
    if (!sp.s1.empty() && !sp.s2.empty()) return sp;
  }
  throw ValidationError("random split produced an empty side after 16 resamples");
}

}  // namespace nacgof
