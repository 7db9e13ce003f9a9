/*
 * SPDX-FileCopyrightText: Copyright (c) 2026, nacgof contributors.
 * SPDX-License-Identifier: Apache-2.0
 */

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "nacgof/cli.hpp"
#include "nacgof/error.hpp"
#include "nacgof/gof.hpp"
#include "nacgof/io.hpp"
#include "nacgof/selection.hpp"

namespace py = pybind11;
using namespace nacgof;

namespace {

// JSON crosses the boundary as text; the Python wrapper parses it.
std::string dump(const json& j) { return j.dump(); }

ClusterOptions cluster_options(double tau, int restarts, double min_frac, bool spherical) {
  ClusterOptions c;
  c.tau = tau;
  c.restarts = restarts;
  c.min_frac = min_frac;
  c.spherical = spherical;
  return c;
}

SparseGraph graph_from_edges(NodeId n, const std::vector<std::tuple<NodeId, NodeId, std::int64_t>>& edges) {
  std::vector<Edge> e;
  e.reserve(edges.size());
  for (const auto& [u, v, w] : edges) e.push_back({u, v, w});
  return SparseGraph::from_edges(n, e);
}

}  // namespace

PYBIND11_MODULE(_nacgof, m) {
  m.doc() = "Adjusted chi-square goodness-of-fit tests for degree-corrected block models";

  // Translators run in reverse registration order, so the base class goes first.
  py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  py::class_<SparseGraph>(m, "Graph")
      .def_static("from_edges", &graph_from_edges, py::arg("n"), py::arg("edges"),
                  "Build from 0-based (u, v, weight) triples; pairs are summed, self-loops dropped.")
      .def_property_readonly("n", &SparseGraph::n)
      .def_property_readonly("edge_sum", &SparseGraph::edge_sum)
      .def("degrees", &SparseGraph::degrees)
      .def("weight", &SparseGraph::at, py::arg("i"), py::arg("j"))
      .def("induced", [](const SparseGraph& g, const std::vector<NodeId>& nodes) { return g.induced(nodes); })
      .def("degree_summary", [](const SparseGraph& g) { return dump(to_json(degree_summary(g))); });

  m.def(
      "load_graph",
      [](const std::string& path, const std::string& format, int index_base) {
        LoadOptions o;
        o.index_base = index_base;
        o.format = format == "mtx" || (format == "auto" && path.ends_with(".mtx")) ? GraphFormat::MatrixMarket
                                                                                   : GraphFormat::EdgeList;
        return load_graph_file(path, o);
      },
      py::arg("path"), py::arg("format") = "auto", py::arg("index_base") = 1);

  m.def(
      "simulate",
      [](const std::string& model_json, std::uint64_t seed) {
        Simulated s = simulate(parse_model_spec(json::parse(model_json)), seed);
        return py::make_tuple(std::move(s.graph), s.labels, dump(s.metadata));
      },
      py::arg("model_json"), py::arg("seed"));

  m.def(
      "cluster",
      [](const SparseGraph& g, int K, std::uint64_t seed, double tau, int restarts, double min_frac, bool spherical) {
        LabelCache cache(g, cluster_options(tau, restarts, min_frac, spherical), seed);
        return cache.labels(K).labels;
      },
      py::arg("graph"), py::arg("K"), py::arg("seed") = 1, py::arg("tau") = 0.25, py::arg("restarts") = 20,
      py::arg("min_frac") = 0.1, py::arg("spherical") = false);

  m.def(
      "gof",
      [](const SparseGraph& g, int K, const std::string& method, std::uint64_t seed, int boot, bool poisson_boot,
         bool two_sided, double tau) {
        TestConfig cfg;
        cfg.method = parse_method(method);
        cfg.cluster.tau = tau;
        cfg.boot_reps = boot;
        cfg.poisson_boot = poisson_boot;
        cfg.nac.two_sided = two_sided;
        py::gil_scoped_release release;
        LabelCache cache(g, cfg.cluster, seed);
        return dump(to_json(run_test(cache, K, cfg, seed)));
      },
      py::arg("graph"), py::arg("K"), py::arg("method") = "snac+", py::arg("seed") = 1, py::arg("boot") = 0,
      py::arg("poisson_boot") = false, py::arg("two_sided") = false, py::arg("tau") = 0.25);

  m.def(
      "select",
      [](const SparseGraph& g, int kmin, int kmax, const std::string& method, double alpha, std::uint64_t seed,
         int boot) {
        TestConfig cfg;
        cfg.method = parse_method(method);
        cfg.boot_reps = boot;
        py::gil_scoped_release release;
        LabelCache cache(g, cfg.cluster, seed);
        SelectionResult r = cfg.method == Method::BIC ? select_k_bic(cache, kmin, kmax)
                                                      : select_k(cache, kmin, kmax, cfg, alpha, seed);
        return dump(to_json(r));
      },
      py::arg("graph"), py::arg("kmin") = 1, py::arg("kmax") = 10, py::arg("method") = "snac+",
      py::arg("alpha") = 1e-6, py::arg("seed") = 1, py::arg("boot") = 0);

  m.def(
      "profile",
      [](const SparseGraph& g, const std::vector<int>& Ks, int repeats, std::uint64_t seed, double smoothness,
         int threads) {
        py::gil_scoped_release release;
        LabelCache cache(g, {}, seed);
        ProfileCurve c = build_profile_curve(profile_points(cache, Ks, repeats, seed, {}, threads), smoothness);
        json pts = json::array();
        for (const auto& p : c.points) pts.push_back({{"K", p.K}, {"statistic", p.statistic}, {"split_seed", p.split_seed}});
        auto features = [](const ElbowDip& f) {
          return json{{"elbow", f.elbow}, {"dip", f.dip ? json(*f.dip) : json(nullptr)}, {"upturns", f.upturns}};
        };
        json fitted = json::array();
        for (double x : c.grid)
          fitted.push_back({{"K", x}, {"fit_gcv", c.fit_gcv.value(x)}, {"fit_smooth", c.fit_smooth.value(x)}});
        return dump({{"points", pts},
                     {"fitted", fitted},
                     {"gcv", features(c.gcv_features)},
                     {"smooth", features(c.smooth_features)}});
      },
      py::arg("graph"), py::arg("Ks"), py::arg("repeats") = 20, py::arg("seed") = 1, py::arg("smoothness") = 0.3,
      py::arg("threads") = 1);

  m.def(
      "ac_statistic",
      [](const std::vector<std::vector<std::int64_t>>& counts, std::vector<int> groups, int K) {
        if (counts.empty()) throw ValidationError("counts must have at least one row");
        const int L = static_cast<int>(counts.front().size());
        CompressedCounts c(counts.size(), L, K);
        for (std::size_t i = 0; i < counts.size(); ++i) {
          if (static_cast<int>(counts[i].size()) != L) throw ValidationError("ragged count rows");
          for (int l = 0; l < L; ++l) c.at(i, l) = counts[i][l];
        }
        c.recompute_totals();
        if (!groups.empty()) c.groups = std::move(groups);
        return dump(to_json(ac_statistic(c)));
      },
      py::arg("counts"), py::arg("groups") = std::vector<int>{}, py::arg("K") = 1);

  m.def("ac_adjust", &ac_adjust, py::arg("y"), py::arg("n_effective"), py::arg("L"));

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        int code;
        {
          py::gil_scoped_release release;
          code = run_cli(args, out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"));
}
