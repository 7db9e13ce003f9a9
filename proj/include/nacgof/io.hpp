/*
 * SPDX-FileCopyrightText: Copyright (c) 2026, nacgof contributors.
 * SPDX-License-Identifier: Apache-2.0
 */

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nacgof/ac.hpp"
#include "nacgof/graph.hpp"
#include "nacgof/nac.hpp"
#include "nacgof/sbm.hpp"
#include "nacgof/selection.hpp"

namespace nacgof {

using nlohmann::json;

json to_json(const DegreeSummary& s);
json to_json(const AcResult& r);
/// {"method","K","L","statistic","p_value","seed","split_seed","n_effective","omega_n",
///  "debiased","metadata"}; absent optionals are null.
json to_json(const TestOutcome& t);
json to_json(const SelectionResult& r);

/// CSV "node,label", both 1-based. Lines starting with '#' are written from `comments`.
void write_labels_csv(std::ostream& out, std::span<const int> labels,
                      const std::vector<std::string>& comments = {});
/// Reads "node,label" (1-based, '#' comments and a header allowed); returns 0-based labels.
std::vector<int> read_labels_csv(std::istream& in, NodeId n);

void write_profile_csv(std::ostream& out, const std::vector<ProfilePoint>& points,
                       const std::vector<std::string>& comments = {});
/// "K,fit_gcv,fit_smooth,d1,d2" on the curve grid; derivatives are of the fixed-smoothness fit.
void write_fitted_csv(std::ostream& out, const ProfileCurve& curve,
                      const std::vector<std::string>& comments = {});
/// Static SVG: profile points, both fitted curves, elbow and dip markers.
std::string profile_svg(const ProfileCurve& curve, const std::string& title = "");

enum class ModelKind { DCSBM, DCLVM };

struct ThetaSpec {
  enum class Kind { Ones, Pareto, Explicit } kind = Kind::Ones;
  double x0 = 0.75;
  double alpha = 4.0;
  std::vector<double> values;
};

/// Simulation parameter file.
///   {"kind":"dcsbm","n":2000,"K":3,"B":[[...]] | "connectivity":{"family":"B1","beta":0.2},
///    "theta":{"pareto":[0.75,4]} | "ones" | [..], "prior":[...], "dist":"poisson",
///    "lambda":40, "seed":1}
/// An explicit B is used as is unless lambda is given, in which case it is rescaled.
struct ModelSpec {
  ModelKind kind = ModelKind::DCSBM;
  int n = 0;
  int K = 1;
  std::optional<Eigen::MatrixXd> B;
  ConnectivityKind family = ConnectivityKind::B1;
  ConnectivityParams connectivity;
  ThetaSpec theta;
  std::vector<double> prior;
  EdgeDist dist = EdgeDist::Poisson;
  std::optional<double> lambda;
  std::uint64_t seed = 0;

  void validate() const;
};

ModelSpec parse_model_spec(const json& j);
json to_json(const ModelSpec& m);

struct Simulated {
  SparseGraph graph;
  std::vector<int> labels;    // 0-based
  std::vector<double> theta;
  Eigen::MatrixXd B;          // empty for DCLVM
  json metadata = json::object();
};

/// Draws labels, propensities, connectivity and the graph from one stream seeded by `seed`.
Simulated simulate(const ModelSpec& spec, std::uint64_t seed);

}  // namespace nacgof
