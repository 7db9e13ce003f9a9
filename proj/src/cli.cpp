/*
 * SPDX-FileCopyrightText: Copyright (c) 2026, nacgof contributors.
 * SPDX-License-Identifier: Apache-2.0
 */

#include "nacgof/cli.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "nacgof/error.hpp"
#include "nacgof/gof.hpp"
#include "nacgof/io.hpp"
#include "nacgof/parallel.hpp"
#include "nacgof/selection.hpp"

namespace nacgof {

namespace {

constexpr const char* kPsiNote =
    "Chi-square terms use psi(x, y) = (x - y)^2 / y with psi(0, 0) = 0, so categories with zero\n"
    "expected and zero observed counts contribute nothing. Rows with zero degree are skipped.";

struct Options {
  std::string input;
  std::string format = "auto";
  int index_base = 1;
  std::optional<double> reduce_q;
  std::uint64_t seed = 1;
  bool seed_given = false;
  int threads = 1;
  std::vector<std::string> emit;
  std::string out;

  std::string method = "snac+";
  int k = 0;
  int kmin = 1;
  int kmax = 10;
  double alpha = 1e-6;
  int boot = 0;
  bool poisson_boot = false;
  bool two_sided = false;
  double tau = 0.25;
  int restarts = 20;
  double min_frac = 0.1;
  bool spherical = false;

  std::string model;
  std::string labels_out;
  int repeats = 10;
  double smoothness = 0.3;
  std::string out_prefix = "profile";
  int reps = 10;
  std::vector<std::string> methods;
  std::vector<int> ks;
};

CLI::Validator method_validator() {
  return CLI::Validator(
      [](std::string& name) -> std::string {
        try {
          parse_method(name);
          return {};
        } catch (const Error& e) {
          return e.what();
        }
      },
      "METHOD");
}

json config_json(const std::string& command, const Options& o) {
  json j = json::object();
  j["command"] = command;
  j["seed"] = o.seed;
  j["threads"] = o.threads;
  j["emit"] = o.emit;
  if (!o.input.empty()) {
    j["input"] = o.input;
    j["format"] = o.format;
    j["index_base"] = o.index_base;
    j["reduce_q"] = o.reduce_q ? json(*o.reduce_q) : json(nullptr);
  }
  if (!o.out.empty()) j["output"] = o.out;
  if (command == "gof" || command == "select" || command == "bench") {
    j["method"] = o.method;
    j["boot"] = o.boot;
    j["poisson_boot"] = o.poisson_boot;
    j["two_sided"] = o.two_sided;
  }
  if (command == "gof" || command == "cluster") j["k"] = o.k;
  if (command == "select" || command == "profile") {
    j["kmin"] = o.kmin;
    j["kmax"] = o.kmax;
  }
  if (command == "select" || command == "bench") j["alpha"] = o.alpha;
  if (command != "simulate" && command != "degrees") {
    j["tau"] = o.tau;
    j["restarts"] = o.restarts;
    j["min_frac"] = o.min_frac;
    j["spherical"] = o.spherical;
  }
  if (command == "simulate" || command == "bench") j["model"] = o.model;
  if (command == "profile") {
    j["repeats"] = o.repeats;
    j["smoothness"] = o.smoothness;
    j["out_prefix"] = o.out_prefix;
  }
  if (command == "bench") {
    j["reps"] = o.reps;
    j["methods"] = o.methods;
    j["ks"] = o.ks;
  }
  return j;
}

std::vector<std::string> config_comment(const json& cfg) { return {"config: " + cfg.dump()}; }

ClusterOptions cluster_options(const Options& o) {
  ClusterOptions c;
  c.tau = o.tau;
  c.restarts = o.restarts;
  c.min_frac = o.min_frac;
  c.spherical = o.spherical;
  return c;
}

TestConfig test_config(const Options& o, Method m) {
  TestConfig cfg;
  cfg.method = m;
  cfg.cluster = cluster_options(o);
  cfg.nac.two_sided = o.two_sided;
  cfg.boot_reps = o.boot;
  cfg.poisson_boot = o.poisson_boot;
  return cfg;
}

SparseGraph load_input(const Options& o, json& info) {
  LoadOptions lo;
  lo.index_base = o.index_base;
  std::string fmt = o.format;
  if (fmt == "auto") {
    const auto dot = o.input.rfind('.');
    fmt = (dot != std::string::npos && o.input.substr(dot) == ".mtx") ? "mtx" : "edgelist";
  }
  lo.format = fmt == "mtx" ? GraphFormat::MatrixMarket : GraphFormat::EdgeList;
  SparseGraph g = load_graph_file(o.input, lo);
  info["n"] = g.n();
  info["edges"] = g.edge_sum();
  info["dropped_self_loops"] = g.dropped_self_loops();
  if (o.reduce_q) {
    std::vector<NodeId> kept;
    g = reduce_by_degree_quantile(g, *o.reduce_q, &kept);
    info["reduced_n"] = g.n();
    info["reduced_edges"] = g.edge_sum();
  }
  return g;
}

/// Writes to the --out file when given, otherwise to `out`.
void emit_text(const Options& o, std::ostream& out, const std::string& text) {
  if (o.out.empty()) {
    out << text;
    return;
  }
  std::ofstream f(o.out, std::ios::binary);
  if (!f) throw ValidationError("cannot open output file '" + o.out + "'");
  f << text;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ValidationError("cannot open output file '" + path + "'");
  f << text;
}

ModelSpec load_model(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ValidationError("cannot open model file '" + path + "'");
  json j;
  try {
    j = json::parse(f);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("model file: ") + e.what());
  }
  return parse_model_spec(j);
}

bool emits(const Options& o, const std::string& what) {
  return std::find(o.emit.begin(), o.emit.end(), what) != o.emit.end();
}

int cmd_degrees(const Options& o, std::ostream& out) {
  json info;
  SparseGraph g = load_input(o, info);
  json j = to_json(degree_summary(g));
  j["config"] = config_json("degrees", o);
  j["graph"] = info;
  emit_text(o, out, j.dump(2) + "\n");
  return kExitOk;
}

int cmd_simulate(const Options& o, std::ostream& out) {
  ModelSpec spec = load_model(o.model);
  Options eff = o;
  if (!o.seed_given) eff.seed = spec.seed;
  json cfg = config_json("simulate", eff);
  cfg["model_spec"] = to_json(spec);
  Simulated sim = simulate(spec, eff.seed);
  std::ostringstream g;
  for (const auto& c : config_comment(cfg)) g << "# " << c << '\n';
  write_edge_list(g, sim.graph, o.index_base);
  emit_text(o, out, g.str());
  if (!o.labels_out.empty()) {
    std::ostringstream l;
    write_labels_csv(l, sim.labels, config_comment(cfg));
    write_file(o.labels_out, l.str());
  }
  if (emits(o, "json")) {
    json meta = sim.metadata;
    meta["config"] = cfg;
    meta["n"] = sim.graph.n();
    meta["edges"] = sim.graph.edge_sum();
    if (o.out.empty())
      std::cerr << meta.dump(2) << '\n';
    else
      write_file(o.out + ".json", meta.dump(2) + "\n");
  }
  return kExitOk;
}

int cmd_cluster(const Options& o, std::ostream& out) {
  if (o.k < 1) throw ValidationError("--k must be >= 1");
  json info;
  SparseGraph g = load_input(o, info);
  LabelCache cache(g, cluster_options(o), o.seed);
  const LabelVector& lv = cache.labels(o.k);
  json cfg = config_json("cluster", o);
  std::vector<std::string> comments = config_comment(cfg);
  comments.push_back("effective_K: " + std::to_string(lv.K));
  std::ostringstream s;
  write_labels_csv(s, lv.labels, comments);
  emit_text(o, out, s.str());
  return kExitOk;
}

int cmd_gof(const Options& o, std::ostream& out) {
  if (o.k < 1) throw ValidationError("--k must be >= 1");
  const Method m = parse_method(o.method);
  json info;
  SparseGraph g = load_input(o, info);
  LabelCache cache(g, cluster_options(o), o.seed);
  TestOutcome t = run_test(cache, o.k, test_config(o, m), o.seed);
  json j = to_json(t);
  j["graph"] = info;
  j["config"] = config_json("gof", o);
  emit_text(o, out, j.dump(2) + "\n");
  return kExitOk;
}

int cmd_select(const Options& o, std::ostream& out) {
  const Method m = parse_method(o.method);
  json info;
  SparseGraph g = load_input(o, info);
  LabelCache cache(g, cluster_options(o), o.seed);
  SelectionResult r = m == Method::BIC ? select_k_bic(cache, o.kmin, o.kmax)
                                       : select_k(cache, o.kmin, o.kmax, test_config(o, m), o.alpha, o.seed);
  json j = to_json(r);
  j["graph"] = info;
  j["config"] = config_json("select", o);
  emit_text(o, out, j.dump(2) + "\n");
  return kExitOk;
}

int cmd_profile(const Options& o, std::ostream& out) {
  if (o.kmin < 1 || o.kmax < o.kmin) throw ValidationError("need 1 <= --kmin <= --kmax");
  json info;
  SparseGraph g = load_input(o, info);
  LabelCache cache(g, cluster_options(o), o.seed);
  std::vector<int> Ks;
  for (int K = o.kmin; K <= o.kmax; ++K) Ks.push_back(K);
  NacOptions nac;
  nac.two_sided = o.two_sided;
  auto points = profile_points(cache, Ks, o.repeats, o.seed, nac, o.threads);
  ProfileCurve curve = build_profile_curve(points, o.smoothness);
  json cfg = config_json("profile", o);
  const auto comments = config_comment(cfg);

  std::ostringstream pcsv, fcsv;
  write_profile_csv(pcsv, curve.points, comments);
  write_fitted_csv(fcsv, curve, comments);
  write_file(o.out_prefix + "_profile.csv", pcsv.str());
  write_file(o.out_prefix + "_fitted.csv", fcsv.str());
  std::string svg = profile_svg(curve, "SNAC+ profile");
  svg.insert(svg.find('\n') + 1, "<!-- " + comments.front() + " -->\n");
  write_file(o.out_prefix + ".svg", svg);

  auto features = [](const ElbowDip& f) {
    return json{{"elbow", f.elbow},
                {"elbow_rounded", f.elbow_rounded},
                {"dip", f.dip ? json(*f.dip) : json(nullptr)},
                {"upturns", f.upturns}};
  };
  json j = {{"smooth", features(curve.smooth_features)},
            {"gcv", features(curve.gcv_features)},
            {"gcv_relative_penalty", curve.fit_gcv.relative_penalty()},
            {"smooth_relative_penalty", curve.fit_smooth.relative_penalty()},
            {"files",
             {o.out_prefix + "_profile.csv", o.out_prefix + "_fitted.csv", o.out_prefix + ".svg"}},
            {"graph", info},
            {"config", cfg}};
  emit_text(o, out, j.dump(2) + "\n");
  return kExitOk;
}

int cmd_bench(const Options& o, std::ostream& out) {
  if (o.reps < 1) throw ValidationError("--reps must be >= 1");
  if (o.ks.empty()) throw ValidationError("--ks needs at least one value");
  ModelSpec spec = load_model(o.model);
  std::vector<Method> methods;
  for (const auto& name : o.methods.empty() ? std::vector<std::string>{o.method} : o.methods)
    methods.push_back(parse_method(name));

  struct Row {
    int rep;
    Method method;
    int K;
    double statistic;
    std::optional<bool> decision;
  };
  std::vector<std::vector<Row>> rows(static_cast<std::size_t>(o.reps));
  parallel_for(rows.size(), o.threads, [&](std::size_t rep) {
    const std::uint64_t rep_seed = derive_seed(o.seed, rep);
    Simulated sim = simulate(spec, derive_seed(rep_seed, 0));
    LabelCache cache(sim.graph, cluster_options(o), derive_seed(rep_seed, 1));
    for (Method m : methods) {
      TestConfig cfg = test_config(o, m);
      for (int K : o.ks) {
        TestOutcome t = run_test(cache, K, cfg, derive_seed(rep_seed, 2));
        std::optional<bool> decision;
        if (has_calibrated_threshold(cfg)) {
          const double thr = o.two_sided ? normal_quantile(1.0 - o.alpha / 2.0) : normal_quantile(1.0 - o.alpha);
          decision = o.two_sided ? std::abs(t.statistic) > thr : t.statistic > thr;
        }
        rows[rep].push_back({static_cast<int>(rep), m, K, t.statistic, decision});
      }
    }
  });

  json cfg = config_json("bench", o);
  cfg["model_spec"] = to_json(spec);
  std::ostringstream s;
  for (const auto& c : config_comment(cfg)) s << "# " << c << '\n';
  s << "rep,method,K,statistic,decision\n" << std::setprecision(17);
  for (const auto& rep_rows : rows)
    for (const auto& r : rep_rows)
      s << r.rep << ',' << method_name(r.method) << ',' << r.K << ',' << r.statistic << ','
        << (r.decision ? (*r.decision ? "reject" : "accept") : "NA") << '\n';
  emit_text(o, out, s.str());
  return kExitOk;
}

void add_graph_input(CLI::App* sub, Options& o) {
  sub->add_option("graph", o.input, "Input graph (edge list or Matrix Market)")->required();
  sub->add_option("--format", o.format, "Input format")
      ->check(CLI::IsMember({"auto", "edgelist", "mtx"}))
      ->capture_default_str();
  sub->add_option("--index-base", o.index_base, "Node index base of the input")
      ->check(CLI::IsMember({0, 1}))
      ->capture_default_str();
  sub->add_option("--reduce-q", o.reduce_q,
                  "Keep only nodes with degree strictly below this degree quantile")
      ->check(CLI::Range(0.0, 1.0));
}

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--seed", o.seed, "Master seed")->capture_default_str();
  sub->add_option("--threads", o.threads, "Worker threads")->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--emit", o.emit, "Extra artifacts {json,csv,svg}")->check(CLI::IsMember({"json", "csv", "svg"}));
  sub->add_option("-o,--out", o.out, "Output path (default: standard output)");
}

void add_cluster_flags(CLI::App* sub, Options& o) {
  sub->add_option("--tau", o.tau, "Laplacian regularization")->check(CLI::NonNegativeNumber)->capture_default_str();
  sub->add_option("--restarts", o.restarts, "k-means restarts")->check(CLI::PositiveNumber)->capture_default_str();
  sub->add_option("--min-frac", o.min_frac, "Dissolve communities smaller than min_frac * n / K")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  sub->add_flag("--spherical", o.spherical, "Row-normalize the embedding before k-means");
}

void add_test_flags(CLI::App* sub, Options& o) {
  sub->add_option("--method", o.method, "nac, nac+, snac, snac+, as, as-sbm, lr, bic")
      ->check(method_validator())
      ->capture_default_str();
  sub->add_option("--boot", o.boot, "Bootstrap debiasing replicates (0 = off)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  sub->add_flag("--poisson-boot", o.poisson_boot, "Poisson instead of Bernoulli bootstrap graphs");
  sub->add_flag("--two-sided", o.two_sided, "Two-sided p-values and thresholds");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"nacgof: adjusted chi-square goodness-of-fit tests for degree-corrected block models"};
  app.require_subcommand(1);
  app.footer(kPsiNote);
  Options o;

  auto* degrees = app.add_subcommand("degrees", "Degree summary of a graph as JSON");
  add_graph_input(degrees, o);
  add_common(degrees, o);

  auto* sim = app.add_subcommand("simulate", "Sample a graph and ground-truth labels from a model file");
  sim->add_option("--model", o.model, "Model parameter JSON (its seed is used unless --seed is given)")->required();
  sim->add_option("--labels", o.labels_out, "Write ground-truth labels CSV here");
  sim->add_option("--index-base", o.index_base, "Node index base of the written edge list")
      ->check(CLI::IsMember({0, 1}))
      ->capture_default_str();
  add_common(sim, o);

  auto* clu = app.add_subcommand("cluster", "Regularized spectral clustering; writes node,label CSV");
  add_graph_input(clu, o);
  clu->add_option("--k", o.k, "Number of communities")->required();
  add_cluster_flags(clu, o);
  add_common(clu, o);

  auto* gof = app.add_subcommand("gof", "Goodness-of-fit statistic at one K");
  gof->footer(kPsiNote);
  add_graph_input(gof, o);
  gof->add_option("--k", o.k, "Candidate number of communities")->required();
  add_test_flags(gof, o);
  add_cluster_flags(gof, o);
  add_common(gof, o);

  auto* sel = app.add_subcommand("select", "Sequential selection of K from below");
  add_graph_input(sel, o);
  sel->add_option("--kmin", o.kmin, "Smallest K")->capture_default_str();
  sel->add_option("--kmax", o.kmax, "Largest K")->capture_default_str();
  sel->add_option("--alpha", o.alpha, "Per-test level")->check(CLI::Range(0.0, 1.0))->capture_default_str();
  add_test_flags(sel, o);
  add_cluster_flags(sel, o);
  add_common(sel, o);

  auto* prof = app.add_subcommand("profile", "SNAC+ community profile with smoothed curves");
  add_graph_input(prof, o);
  prof->add_option("--kmin", o.kmin, "Smallest K")->capture_default_str();
  prof->add_option("--kmax", o.kmax, "Largest K (default 13)");
  prof->add_option("--repeats", o.repeats, "Splits per K (default 20)");
  prof->add_option("--smoothness", o.smoothness, "Smoothness in [0,1] of the fixed fit")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  prof->add_option("--out-prefix", o.out_prefix, "Prefix for CSV and SVG files")->capture_default_str();
  prof->add_flag("--two-sided", o.two_sided, "Two-sided p-values");
  add_cluster_flags(prof, o);
  add_common(prof, o);

  auto* bench = app.add_subcommand("bench", "Replicated simulation grid; tidy CSV of statistics");
  bench->add_option("--model", o.model, "Model parameter JSON")->required();
  bench->add_option("--reps", o.reps, "Replicates")->capture_default_str();
  bench->add_option("--methods", o.methods, "Methods to run (default: --method)")->check(method_validator());
  bench->add_option("--ks", o.ks, "Candidate K values")->required();
  bench->add_option("--alpha", o.alpha, "Level for decisions")->check(CLI::Range(0.0, 1.0))->capture_default_str();
  add_test_flags(bench, o);
  add_cluster_flags(bench, o);
  add_common(bench, o);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    err << app.help();
    return kExitUsage;
  }

  o.seed_given = sim->count("--seed") > 0;
  if (prof->parsed()) {
    if (prof->count("--kmax") == 0) o.kmax = 13;
    if (prof->count("--repeats") == 0) o.repeats = 20;
  }

  using Handler = std::function<int(const Options&, std::ostream&)>;
  const std::vector<std::pair<CLI::App*, Handler>> handlers = {
      {degrees, cmd_degrees}, {sim, cmd_simulate},  {clu, cmd_cluster}, {gof, cmd_gof},
      {sel, cmd_select},      {prof, cmd_profile},  {bench, cmd_bench}};
  try {
    for (const auto& [sub, fn] : handlers)
      if (sub->parsed()) return fn(o, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    switch (e.kind()) {
      case ErrorKind::Usage: return kExitUsage;
      case ErrorKind::Data: return kExitData;
      case ErrorKind::Numerical: return kExitNumerical;
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace nacgof
