/*
 * SPDX-FileCopyrightText: Copyright (c) 2026, nacgof contributors.
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <cstdint>
#include <istream>
#include <span>
#include <string>
#include <vector>

#include "nacgof/rng.hpp"

namespace nacgof {

using NodeId = std::int32_t;
using Weight = std::int32_t;

/// One undirected edge {u, v} carrying an integer multiplicity.
struct Edge {
  NodeId u;
  NodeId v;
  Weight w = 1;
};

/// Symmetric sparse adjacency with zero diagonal, stored in compressed-row form.
/// Each undirected edge {i, j} appears in both row i and row j. Immutable once built.
class SparseGraph {
 public:
  SparseGraph() = default;

  /// Builds from undirected edges. Duplicate pairs are summed and self-loops dropped
  /// (counted in dropped_self_loops()). Throws ValidationError on out-of-range ids
  /// or negative weights.
  static SparseGraph from_edges(NodeId n, std::span<const Edge> edges);

  NodeId n() const noexcept { return n_; }
  std::int64_t nnz() const noexcept { return static_cast<std::int64_t>(cols_.size()); }

  std::span<const NodeId> neighbors(NodeId i) const noexcept {
    return {cols_.data() + row_ptr_[i], cols_.data() + row_ptr_[i + 1]};
  }
  std::span<const Weight> weights(NodeId i) const noexcept {
    return {vals_.data() + row_ptr_[i], vals_.data() + row_ptr_[i + 1]};
  }

  /// A_ij by binary search over row i.
  Weight at(NodeId i, NodeId j) const noexcept;

  /// Weighted row sum of row i.
  std::int64_t degree(NodeId i) const noexcept;
  std::vector<std::int64_t> degrees() const;

  /// Sum of A_ij over i < j.
  std::int64_t edge_sum() const noexcept { return edge_sum_; }
  std::size_t dropped_self_loops() const noexcept { return dropped_loops_; }

  /// Always true for graphs produced by from_edges; recomputed by check_invariants().
  bool is_symmetric() const noexcept { return true; }

  /// Full O(nnz log) audit of symmetry, zero diagonal and positivity.
  bool check_invariants() const;

  /// Induced subgraph on `nodes` (must be sorted, unique). Node k of the result is nodes[k].
  SparseGraph induced(std::span<const NodeId> nodes) const;

  /// All undirected edges with u < v.
  std::vector<Edge> edge_list() const;

  const std::vector<std::int64_t>& row_ptr() const noexcept { return row_ptr_; }
  const std::vector<NodeId>& col_index() const noexcept { return cols_; }
  const std::vector<Weight>& values() const noexcept { return vals_; }

 private:
  NodeId n_ = 0;
  std::vector<std::int64_t> row_ptr_{0};
  std::vector<NodeId> cols_;
  std::vector<Weight> vals_;
  std::int64_t edge_sum_ = 0;
  std::size_t dropped_loops_ = 0;
};

enum class GraphFormat { EdgeList, MatrixMarket };

struct LoadOptions {
  GraphFormat format = GraphFormat::EdgeList;
  int index_base = 1;
  /// When true each line contributes to the unordered pair {u, v}, so (i,j) and (j,i)
  /// lines are summed. When false, lines are directed entries and the result must be
  /// symmetric.
  bool symmetrize = true;
  bool drop_self_loops = true;
  /// Declared node count; 0 infers it from the largest index.
  NodeId n = 0;
};

SparseGraph load_graph(std::istream& in, const LoadOptions& opts = {});
SparseGraph load_graph_file(const std::string& path, const LoadOptions& opts = {});

/// Writes "u v [w]" lines using the given index base.
void write_edge_list(std::ostream& out, const SparseGraph& g, int index_base = 1);

struct DegreeSummary {
  NodeId n = 0;
  double min = 0, q1 = 0, median = 0, mean = 0, q3 = 0, max = 0;
};

/// Nearest-rank empirical quantile: the ceil(q * m)-th order statistic (q in (0, 1]).
double nearest_rank_quantile(std::vector<std::int64_t> values, double q);

DegreeSummary degree_summary(const SparseGraph& g);

/// Induced subgraph on nodes whose degree is strictly below the nearest-rank
/// q-quantile of the full degree sequence. `kept`, if given, receives the original ids.
SparseGraph reduce_by_degree_quantile(const SparseGraph& g, double q,
                                      std::vector<NodeId>* kept = nullptr);

struct NodeSplit {
  std::vector<NodeId> s1;
  std::vector<NodeId> s2;
  std::uint64_t seed = 0;
};

/// Puts each node in s1 independently with probability 1/2; s2 is the complement.
/// Empty sides are resampled up to 16 times.
NodeSplit random_split(NodeId n, std::uint64_t seed);

}  // namespace nacgof
