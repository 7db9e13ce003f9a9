/*
 * SPDX-FileCopyrightText: Copyright (c) 2026, nacgof contributors.
 * SPDX-License-Identifier: Apache-2.0
 */

#include "nacgof/io.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "nacgof/error.hpp"

namespace nacgof {

namespace {

json opt(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

void write_comments(std::ostream& out, const std::vector<std::string>& comments) {
  for (const auto& c : comments) out << "# " << c << '\n';
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return {};
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace

json to_json(const DegreeSummary& s) {
  return {{"n", s.n},           {"min", s.min}, {"q1", s.q1}, {"median", s.median},
          {"mean", s.mean},     {"q3", s.q3},   {"max", s.max}};
}

json to_json(const AcResult& r) {
  return {{"y_stat", r.y_stat},
          {"t_stat", r.t_stat},
          {"gamma", r.gamma},
          {"n_effective", r.n_effective},
          {"harmonic_mean_d", r.harmonic_mean_d},
          {"omega_n", r.omega_n},
          {"psi_convention", "psi(0,0)=0"}};
}

json to_json(const TestOutcome& t) {
  json j = json::object();
  j["method"] = method_name(t.method);
  j["K"] = t.K;
  j["L"] = t.L;
  j["statistic"] = t.statistic;
  j["p_value"] = opt(t.p_value);
  j["seed"] = t.seed;
  j["split_seed"] = t.split_seed ? json(*t.split_seed) : json(nullptr);
  j["n_effective"] = t.metadata.contains("n_effective") ? t.metadata["n_effective"] : json(nullptr);
  j["omega_n"] = t.metadata.contains("omega_n") ? t.metadata["omega_n"] : json(nullptr);
  j["debiased"] = t.debiased;
  j["metadata"] = t.metadata;
  return j;
}

json to_json(const SelectionResult& r) {
  json pv = json::array();
  for (const auto& p : r.p_values) pv.push_back(opt(p));
  return {{"chosen_K", r.chosen_K}, {"tested_Ks", r.tested_Ks}, {"statistics", r.statistics},
          {"p_values", pv},         {"alpha", r.alpha},         {"censored", r.censored},
          {"method", r.method}};
}

void write_labels_csv(std::ostream& out, std::span<const int> labels,
                      const std::vector<std::string>& comments) {
  write_comments(out, comments);
  out << "node,label\n";
  for (std::size_t i = 0; i < labels.size(); ++i) out << i + 1 << ',' << labels[i] + 1 << '\n';
}

std::vector<int> read_labels_csv(std::istream& in, NodeId n) {
  std::vector<int> labels(static_cast<std::size_t>(n), -1);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    if (lower(line) == "node,label") continue;
    std::istringstream ss(line);
    long long node = 0, label = 0;
    char comma = 0;
    if (!(ss >> node >> comma >> label) || comma != ',')
      throw ParseError("expected 'node,label'", lineno);
    if (node < 1 || node > n) throw ParseError("node id out of range", lineno);
    if (label < 1) throw ParseError("labels are 1-based", lineno);
    labels[static_cast<std::size_t>(node - 1)] = static_cast<int>(label - 1);
  }
  for (int l : labels)
    if (l < 0) throw ValidationError("labels file does not cover every node");
  return labels;
}

void write_profile_csv(std::ostream& out, const std::vector<ProfilePoint>& points,
                       const std::vector<std::string>& comments) {
  write_comments(out, comments);
  out << "K,statistic,split_seed\n" << std::setprecision(17);
  for (const auto& p : points) out << p.K << ',' << p.statistic << ',' << p.split_seed << '\n';
}

void write_fitted_csv(std::ostream& out, const ProfileCurve& curve,
                      const std::vector<std::string>& comments) {
  write_comments(out, comments);
  out << "K,fit_gcv,fit_smooth,d1,d2\n" << std::setprecision(12);
  for (double x : curve.grid)
    out << x << ',' << curve.fit_gcv.value(x) << ',' << curve.fit_smooth.value(x) << ','
        << curve.fit_smooth.d1(x) << ',' << curve.fit_smooth.d2(x) << '\n';
}

std::string profile_svg(const ProfileCurve& curve, const std::string& title) {
  const double W = 720, H = 440, ml = 60, mr = 20, mt = 40, mb = 50;
  double xlo = curve.fit_gcv.x_min(), xhi = curve.fit_gcv.x_max();
  double ylo = std::numeric_limits<double>::infinity(), yhi = -ylo;
  auto grow = [&](double y) {
    if (std::isfinite(y)) {
      ylo = std::min(ylo, y);
      yhi = std::max(yhi, y);
    }
  };
  for (const auto& p : curve.points) grow(p.statistic);
  for (double x : curve.grid) {
    grow(curve.fit_gcv.value(x));
    grow(curve.fit_smooth.value(x));
  }
  if (!(yhi > ylo)) {
    ylo -= 1;
    yhi += 1;
  }
  if (!(xhi > xlo)) xhi = xlo + 1;
  const double pad = 0.05 * (yhi - ylo);
  ylo -= pad;
  yhi += pad;
  auto px = [&](double x) { return ml + (x - xlo) / (xhi - xlo) * (W - ml - mr); };
  auto py = [&](double y) { return H - mb - (y - ylo) / (yhi - ylo) * (H - mt - mb); };

  std::ostringstream s;
  s << std::fixed << std::setprecision(2);
  s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
    << "\" viewBox=\"0 0 " << W << ' ' << H << "\">\n";
  s << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!title.empty())
    s << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\" "
      << "font-size=\"15\">" << title << "</text>\n";
  // axes
  s << "<line x1=\"" << ml << "\" y1=\"" << H - mb << "\" x2=\"" << W - mr << "\" y2=\"" << H - mb
    << "\" stroke=\"black\"/>\n";
  s << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << H - mb
    << "\" stroke=\"black\"/>\n";
  for (int k = static_cast<int>(std::ceil(xlo)); k <= static_cast<int>(std::floor(xhi)); ++k)
    s << "<text x=\"" << px(k) << "\" y=\"" << H - mb + 18
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << k
      << "</text>\n";
  for (int t = 0; t <= 4; ++t) {
    const double y = ylo + (yhi - ylo) * t / 4.0;
    s << "<text x=\"" << ml - 6 << "\" y=\"" << py(y) + 4
      << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << y << "</text>\n";
  }
  if (ylo < 0 && yhi > 0)
    s << "<line x1=\"" << ml << "\" y1=\"" << py(0) << "\" x2=\"" << W - mr << "\" y2=\"" << py(0)
      << "\" stroke=\"#bbbbbb\" stroke-dasharray=\"4 3\"/>\n";
  s << "<text x=\"" << W / 2 << "\" y=\"" << H - 12
    << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">K</text>\n";

  for (const auto& p : curve.points)
    if (std::isfinite(p.statistic))
      s << "<circle cx=\"" << px(p.K) << "\" cy=\"" << py(p.statistic)
        << "\" r=\"2.5\" fill=\"#555555\" fill-opacity=\"0.6\"/>\n";

  auto polyline = [&](const SmoothingSpline& f, const char* color, const char* dash) {
    s << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\"";
    if (dash) s << " stroke-dasharray=\"" << dash << "\"";
    s << " points=\"";
    for (double x : curve.grid) s << px(x) << ',' << py(f.value(x)) << ' ';
    s << "\"/>\n";
  };
  polyline(curve.fit_gcv, "#1f77b4", "6 4");
  polyline(curve.fit_smooth, "#d62728", nullptr);

  auto vline = [&](double x, const char* color, const char* label) {
    s << "<line x1=\"" << px(x) << "\" y1=\"" << mt << "\" x2=\"" << px(x) << "\" y2=\"" << H - mb
      << "\" stroke=\"" << color << "\" stroke-dasharray=\"2 3\"/>\n";
    s << "<text x=\"" << px(x) + 4 << "\" y=\"" << mt + 12 << "\" font-family=\"sans-serif\" "
      << "font-size=\"11\" fill=\"" << color << "\">" << label << "</text>\n";
  };
  vline(curve.smooth_features.elbow, "#2ca02c", "elbow");
  if (curve.smooth_features.dip) vline(*curve.smooth_features.dip, "#9467bd", "dip");

  s << "<text x=\"" << W - mr - 150 << "\" y=\"" << mt << "\" font-family=\"sans-serif\" "
    << "font-size=\"11\" fill=\"#1f77b4\">GCV fit</text>\n";
  s << "<text x=\"" << W - mr - 150 << "\" y=\"" << mt + 14 << "\" font-family=\"sans-serif\" "
    << "font-size=\"11\" fill=\"#d62728\">smoothed fit</text>\n";
  s << "</svg>\n";
  return s.str();
}

void ModelSpec::validate() const {
  if (n < 2) throw ValidationError("model: n must be >= 2");
  if (K < 1 || K > n) throw ValidationError("model: K must lie in [1, n]");
  if (!prior.empty()) {
    if (static_cast<int>(prior.size()) != K) throw ValidationError("model: prior must have K entries");
    for (double p : prior)
      if (!(p >= 0.0) || !std::isfinite(p)) throw ValidationError("model: prior entries must be >= 0");
  }
  if (B && (B->rows() != K || B->cols() != K)) throw ValidationError("model: B must be K x K");
  if (B && (*B != B->transpose() || (B->array() < 0.0).any()))
    throw ValidationError("model: B must be symmetric and nonnegative");
  if (lambda && !(*lambda > 0.0)) throw ValidationError("model: lambda must be positive");
  if (!B && !lambda && kind == ModelKind::DCSBM)
    throw ValidationError("model: need B or lambda");
  if (kind == ModelKind::DCLVM && !lambda) throw ValidationError("model: dclvm needs lambda");
  if (theta.kind == ThetaSpec::Kind::Explicit && static_cast<int>(theta.values.size()) != n)
    throw ValidationError("model: explicit theta must have n entries");
  if (theta.kind == ThetaSpec::Kind::Pareto && !(theta.x0 > 0.0 && theta.alpha > 0.0))
    throw ValidationError("model: pareto parameters must be positive");
}

ModelSpec parse_model_spec(const json& j) {
  if (!j.is_object()) throw ValidationError("model: expected a JSON object");
  ModelSpec m;
  try {
    const std::string kind = lower(j.value("kind", std::string("dcsbm")));
    if (kind == "dcsbm" || kind == "sbm")
      m.kind = ModelKind::DCSBM;
    else if (kind == "dclvm")
      m.kind = ModelKind::DCLVM;
    else
      throw ValidationError("model: unknown kind '" + kind + "'");
    m.n = j.at("n").get<int>();
    m.K = j.value("K", 1);
    if (j.contains("B")) {
      const auto rows = j.at("B").get<std::vector<std::vector<double>>>();
      Eigen::MatrixXd B(static_cast<Eigen::Index>(rows.size()), m.K);
      if (static_cast<int>(rows.size()) != m.K) throw ValidationError("model: B must be K x K");
      for (int a = 0; a < m.K; ++a) {
        if (static_cast<int>(rows[a].size()) != m.K) throw ValidationError("model: B must be K x K");
        for (int b = 0; b < m.K; ++b) B(a, b) = rows[a][b];
      }
      m.B = B;
    }
    if (j.contains("connectivity")) {
      const auto& c = j.at("connectivity");
      const std::string fam = lower(c.value("family", std::string("b1")));
      if (fam == "b1")
        m.family = ConnectivityKind::B1;
      else if (fam == "b2")
        m.family = ConnectivityKind::B2;
      else if (fam == "b3")
        m.family = ConnectivityKind::B3;
      else
        throw ValidationError("model: unknown connectivity family '" + fam + "'");
      m.connectivity.beta = c.value("beta", m.connectivity.beta);
      m.connectivity.gamma = c.value("gamma", m.connectivity.gamma);
      if (c.contains("w")) m.connectivity.w = c.at("w").get<std::vector<double>>();
    }
    if (j.contains("theta")) {
      const auto& t = j.at("theta");
      if (t.is_string()) {
        if (lower(t.get<std::string>()) != "ones") throw ValidationError("model: theta must be 'ones'");
        m.theta.kind = ThetaSpec::Kind::Ones;
      } else if (t.is_array()) {
        m.theta.kind = ThetaSpec::Kind::Explicit;
        m.theta.values = t.get<std::vector<double>>();
      } else if (t.is_object() && t.contains("pareto")) {
        const auto p = t.at("pareto").get<std::vector<double>>();
        if (p.size() != 2) throw ValidationError("model: pareto takes [x0, alpha]");
        m.theta.kind = ThetaSpec::Kind::Pareto;
        m.theta.x0 = p[0];
        m.theta.alpha = p[1];
      } else {
        throw ValidationError("model: unrecognized theta specification");
      }
    }
    if (j.contains("prior")) m.prior = j.at("prior").get<std::vector<double>>();
    const std::string dist = lower(j.value("dist", std::string("poisson")));
    if (dist == "poisson")
      m.dist = EdgeDist::Poisson;
    else if (dist == "bernoulli")
      m.dist = EdgeDist::Bernoulli;
    else
      throw ValidationError("model: unknown dist '" + dist + "'");
    if (j.contains("lambda") && !j.at("lambda").is_null()) m.lambda = j.at("lambda").get<double>();
    m.seed = j.value("seed", std::uint64_t{0});
  } catch (const json::exception& e) {
    throw ValidationError(std::string("model: ") + e.what());
  }
  m.validate();
  return m;
}

json to_json(const ModelSpec& m) {
  json j = json::object();
  j["kind"] = m.kind == ModelKind::DCSBM ? "dcsbm" : "dclvm";
  j["n"] = m.n;
  j["K"] = m.K;
  if (m.B) {
    json rows = json::array();
    for (int a = 0; a < m.K; ++a) {
      json r = json::array();
      for (int b = 0; b < m.K; ++b) r.push_back((*m.B)(a, b));
      rows.push_back(r);
    }
    j["B"] = rows;
  } else {
    const char* fam = m.family == ConnectivityKind::B1 ? "B1" : m.family == ConnectivityKind::B2 ? "B2" : "B3";
    j["connectivity"] = {{"family", fam}, {"beta", m.connectivity.beta}, {"gamma", m.connectivity.gamma},
                         {"w", m.connectivity.w}};
  }
  switch (m.theta.kind) {
    case ThetaSpec::Kind::Ones: j["theta"] = "ones"; break;
    case ThetaSpec::Kind::Pareto: j["theta"] = {{"pareto", {m.theta.x0, m.theta.alpha}}}; break;
    case ThetaSpec::Kind::Explicit: j["theta"] = m.theta.values; break;
  }
  if (!m.prior.empty()) j["prior"] = m.prior;
  j["dist"] = m.dist == EdgeDist::Poisson ? "poisson" : "bernoulli";
  j["lambda"] = m.lambda ? json(*m.lambda) : json(nullptr);
  j["seed"] = m.seed;
  return j;
}

Simulated simulate(const ModelSpec& spec, std::uint64_t seed) {
  spec.validate();
  Rng rng = make_rng(seed);
  std::vector<double> prior = spec.prior.empty() ? std::vector<double>(spec.K, 1.0) : spec.prior;
  Simulated out;
  out.labels = sample_labels(spec.n, prior, rng);
  switch (spec.theta.kind) {
    case ThetaSpec::Kind::Ones: out.theta.assign(spec.n, 1.0); break;
    case ThetaSpec::Kind::Pareto: out.theta = sample_pareto_theta(spec.n, spec.theta.x0, spec.theta.alpha, rng); break;
    case ThetaSpec::Kind::Explicit: out.theta = spec.theta.values; break;
  }
  if (spec.kind == ModelKind::DCLVM) {
    DclvmParams p{spec.K, out.labels, out.theta};
    DclvmSample s = sample_dclvm(p, *spec.lambda, rng);
    out.graph = std::move(s.graph);
    out.metadata = {{"scale", s.scale}, {"clip_fraction", s.clip_fraction}, {"clip_warning", s.clip_warning}};
    return out;
  }
  Eigen::MatrixXd B0 = spec.B ? *spec.B : make_connectivity(spec.family, spec.K, spec.connectivity, rng);
  out.B = spec.lambda ? scale_to_expected_degree(B0, out.labels, out.theta, *spec.lambda) : B0;
  DcsbmParams p{spec.K, out.B, out.labels, out.theta, spec.dist};
  SamplerStats stats;
  out.graph = sample_dcsbm(p, rng, &stats);
  out.metadata = {{"clipped_pairs", stats.clipped_pairs}, {"dense_blocks", stats.dense_blocks},
                  {"expected_average_degree", expected_average_degree(out.B, out.labels, out.theta)}};
  return out;
}

}  // namespace nacgof
