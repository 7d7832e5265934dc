// Copyright 2026 The raqm-lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "raqm/bellharness.hpp"
#include "raqm/chaos.hpp"
#include "raqm/cli.hpp"
#include "raqm/hpfloat.hpp"
#include "raqm/sphgeom.hpp"
#include "raqm/states.hpp"

namespace raqm::cli {

namespace {

using json = nlohmann::ordered_json;
using exactmath::PrimeModulus;
using exactmath::Rational;
using exactmath::RationalAngle;

json rational_json(const Rational& r) { return {{"rational", format_rational(r)}, {"decimal", format_decimal(r.to_double())}}; }

json header(const ExperimentConfig& cfg) {
  json j;
  j["tool"] = "raqm";
  j["version"] = std::string(kVersion);
  j["command"] = cfg.command;
  json c = json::object();
  for (const auto& [k, v] : cfg.provenance()) c[k] = v;
  j["config"] = c;
  return j;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

/// Resolves an output key: "none" disables, "auto" picks `fallback`
/// (which may itself be empty to mean no file).
std::optional<std::string> output_path(const ExperimentConfig& cfg, std::string_view key, const std::string& fallback) {
  if (!cfg.has(key)) return std::nullopt;
  const std::string& v = cfg.get(key);
  if (v == "none") return std::nullopt;
  if (v == "auto") return fallback.empty() ? std::nullopt : std::optional<std::string>(fallback);
  return v;
}

bell::ExperimentKind kind_of(const std::string& name) {
  return name == "bell1964" ? bell::ExperimentKind::Bell1964 : bell::ExperimentKind::Chsh;
}

bell::ExperimentSetup build_setup(const ExperimentConfig& cfg, bell::ExperimentKind kind, std::uint64_t p) {
  const double eps = cfg.epsilon_for(p);
  bell::ExperimentSetup setup = bell::canonical_setup(kind, p, eps);

  std::string angle_mode = cfg.get("angle_mode");
  if (angle_mode == "auto") angle_mode = kind == bell::ExperimentKind::Chsh ? "polariser" : "spin";
  const double scale = (angle_mode == "polariser" ? 2.0 : 1.0) * std::numbers::pi / 180.0;

  std::vector<double> deg = cfg.get("angles") == "canonical"
                                ? (kind == bell::ExperimentKind::Chsh ? std::vector<double>{0, 45, 22.5, 67.5}
                                                                      : std::vector<double>{0, 45, 90})
                                : cfg.get_list("angles");
  if (kind == bell::ExperimentKind::Chsh) {
    if (deg.size() != 4) throw ConfigError("chsh needs four angles: a0,a1,b0,b1");
    setup.alice = {{0, deg[0] * scale, eps}, {1, deg[1] * scale, eps}};
    setup.bob = {{0, deg[2] * scale, eps}, {1, deg[3] * scale, eps}};
  } else {
    if (deg.size() != 3) throw ConfigError("bell1964 needs three angles: x1,x2,x3");
    setup.alice = {{1, deg[0] * scale, eps}, {2, deg[1] * scale, eps}, {3, deg[2] * scale, eps}};
    setup.bob = setup.alice;
  }
  setup.seed = cfg.get_u64("seed");
  setup.runs = cfg.get_u64("runs");
  setup.mode = cfg.get("mode") == "exact" ? bell::CountMode::Exact : bell::CountMode::Sampled;
  setup.certify = cfg.has("certify") ? cfg.get_bool("certify") : false;
  setup.threads = static_cast<int>(cfg.get_u64("threads"));
  return setup;
}

std::string cell_name(bell::Cell c) { return fmt::format("({},{})", c.first, c.second); }

json correlations_json(const bell::ExperimentResult& result) {
  json j = json::object();
  for (const auto& cc : result.correlations) {
    json e = cc.exact ? rational_json(*cc.exact) : json{{"rational", nullptr}, {"decimal", "nan"}};
    e["samples"] = cc.samples;
    j[cell_name(cc.cell)] = e;
  }
  return j;
}

double bins_for(const ExperimentConfig& cfg, std::uint64_t p) {
  return cfg.get("bins") == "epsilon" ? cfg.epsilon_for(p) : cfg.get_double("bins");
}

json mi_json(const bell::MIReport& mi, bool full) {
  json j;
  j["bin_width"] = format_decimal(mi.bin_width);
  j["coarse_chi2"] = format_decimal(mi.chi2);
  j["coarse_dof"] = mi.dof;
  j["coarse_p"] = format_decimal(mi.p_value);
  j["exact_product_zero_rate"] = format_decimal(mi.product_zero_rate);
  j["single_flip_undefined_rate"] = format_decimal(mi.single_flip_undefined_rate);
  if (full) {
    j["runs"] = mi.runs;
    j["all_defined_fraction"] = format_decimal(mi.all_defined_fraction);
    json cells = json::object();
    for (const auto& h : mi.cells) cells[cell_name(h.cell)] = {{"count", h.count}, {"bins", h.bins}};
    j["coarse_histograms"] = cells;
    json support = json::object();
    for (std::size_t i = 0; i < mi.cells.size(); ++i) {
      json row = json::object();
      for (std::size_t k = 0; k < mi.cells.size(); ++k) row[cell_name(mi.cells[k].cell)] = mi.support[i][k];
      support[cell_name(mi.cells[i].cell)] = row;
    }
    j["defined_support"] = support;
  }
  return j;
}

json audit_json(const bell::AuditReport& a) {
  return {{"runs", a.runs},
          {"lc1_violations", a.lc1_violations},
          {"lc2_events", a.lc2_events},
          {"defined_checked", a.defined_checked}};
}

int cmd_experiment(const ExperimentConfig& cfg, bell::ExperimentKind kind, std::ostream& out, ArtifactSet& art) {
  const std::uint64_t p = cfg.get_u64("p");
  const auto setup = build_setup(cfg, kind, p);
  const auto result = bell::run_experiment(setup);

  json j = header(cfg);
  j["epsilon_effective"] = format_decimal(cfg.epsilon_for(p));
  if (kind == bell::ExperimentKind::Chsh) {
    j["S"] = format_decimal(result.s);
    j["S_signed"] = format_decimal(result.s_signed);
    j["S_rational"] = result.s_exact ? json(format_rational(*result.s_exact)) : json(nullptr);
    out << fmt::format("S = {}  (2*sqrt(2) = {})\n", format_decimal(result.s), format_decimal(2 * std::sqrt(2.0)));
  } else {
    j["lhs"] = format_decimal(result.lhs);
    j["rhs"] = format_decimal(result.rhs);
    j["violated"] = result.violated;
    out << fmt::format("|C12 - C13| = {}  1 + C23 = {}  violated = {}\n", format_decimal(result.lhs),
                       format_decimal(result.rhs), result.violated);
  }
  j["correlations"] = correlations_json(result);
  try {
    j["mi"] = mi_json(bell::mi_report(result.records, kind, bins_for(cfg, p)), false);
  } catch (const bell::DegenerateReport& e) {
    j["mi"] = nullptr;
    out << "mi: " << e.what() << "\n";
  }
  if (setup.certify) {
    const auto audit = bell::causality_audit(result.records, setup);
    j["lc1_violations"] = audit.lc1_violations;
    j["lc2_events"] = audit.lc2_events;
  } else {
    j["lc1_violations"] = nullptr;
    j["lc2_events"] = nullptr;
  }
  for (const auto& cc : result.correlations) {
    out << fmt::format("C{} = {}  [{} samples]\n", cell_name(cc.cell),
                       cc.exact ? format_rational(*cc.exact) : std::string("n/a"), cc.samples);
  }

  if (auto path = output_path(cfg, "out", cfg.command + "_runs.csv")) art.add(*path, run_log_csv(result.records));
  if (auto path = output_path(cfg, "summary", cfg.command + "_summary.json")) art.add(*path, dump(j));
  return kExitOk;
}

int cmd_mi_report(const ExperimentConfig& cfg, std::ostream& out, ArtifactSet& art) {
  const auto kind = kind_of(cfg.get("experiment"));
  const std::uint64_t p = cfg.get_u64("p");
  const auto setup = build_setup(cfg, kind, p);
  const auto records = setup.threads > 1 ? bell::run_records_parallel(setup, setup.threads)
                                         : bell::run_records_serial(setup);
  const auto mi = bell::mi_report(records, kind, bins_for(cfg, p));
  json j = header(cfg);
  j["mi"] = mi_json(mi, true);
  out << fmt::format("coarse chi2 = {} (dof {}), p-value = {}\n", format_decimal(mi.chi2), mi.dof,
                     format_decimal(mi.p_value));
  out << fmt::format("single-flip undefined rate = {}, product-zero rate = {}\n",
                     format_decimal(mi.single_flip_undefined_rate), format_decimal(mi.product_zero_rate));
  if (auto path = output_path(cfg, "summary", "mi_report.json")) art.add(*path, dump(j));
  return kExitOk;
}

int cmd_audit(const ExperimentConfig& cfg, std::ostream& out, ArtifactSet& art) {
  const auto kind = kind_of(cfg.get("experiment"));
  auto setup = build_setup(cfg, kind, cfg.get_u64("p"));
  const auto records = setup.threads > 1 ? bell::run_records_parallel(setup, setup.threads)
                                         : bell::run_records_serial(setup);
  const auto audit = bell::causality_audit(records, setup);
  json j = header(cfg);
  j["audit"] = audit_json(audit);
  out << fmt::format("runs = {}  lc1 violations = {}  lc2 events = {}  defined checks = {}\n", audit.runs,
                     audit.lc1_violations, audit.lc2_events, audit.defined_checked);
  if (auto path = output_path(cfg, "summary", "audit.json")) art.add(*path, dump(j));
  return kExitOk;
}

int cmd_convergence(const ExperimentConfig& cfg, std::ostream& out, ArtifactSet& art) {
  const double target = 2.0 * std::sqrt(2.0);
  std::string csv = "p,epsilon,S_rational,S,deviation,bound\n";
  json rows = json::array();
  double previous = std::numeric_limits<double>::infinity();
  bool decreasing = true;
  for (double pv : cfg.get_list("primes")) {
    const auto p = static_cast<std::uint64_t>(pv);
    auto setup = build_setup(cfg, bell::ExperimentKind::Chsh, p);
    setup.certify = false;
    const auto result = bell::run_experiment(setup);
    const double dev = std::abs(result.s - target);
    decreasing = decreasing && dev < previous;
    previous = dev;
    const std::string s_rat = result.s_exact ? format_rational(*result.s_exact) : "";
    csv += fmt::format("{},{},{},{},{},{}\n", p, format_decimal(setup.alice[0].epsilon), s_rat,
                       format_decimal(result.s), format_decimal(dev), format_decimal(4.0 / static_cast<double>(p)));
    rows.push_back({{"p", p},
                    {"S_rational", s_rat},
                    {"S", format_decimal(result.s)},
                    {"deviation", format_decimal(dev)},
                    {"bound", format_decimal(4.0 / static_cast<double>(p))}});
    out << fmt::format("p = {:>6}  S = {}  |S - 2sqrt2| = {}\n", p, format_decimal(result.s), format_decimal(dev));
  }
  json j = header(cfg);
  j["scan"] = rows;
  j["strictly_decreasing"] = decreasing;
  if (auto path = output_path(cfg, "out", "convergence.csv")) art.add(*path, csv);
  if (auto path = output_path(cfg, "summary", "convergence_summary.json")) art.add(*path, dump(j));
  return kExitOk;
}

int cmd_triangle(const ExperimentConfig& cfg, std::ostream& out, ArtifactSet& art) {
  const sphgeom::TriangleSpec spec{Rational::parse(cfg.get("cos_xy")), Rational::parse(cfg.get("cos_yz")),
                                   RationalAngle::parse(cfg.get("vertex"))};
  const auto cert = sphgeom::certify_triangle(spec);
  const auto& e = cert.expression;
  out << "verdict: " << sphgeom::to_string(cert.verdict.kind) << "\n";
  out << "cos XZ = " << format_rational(e.rational_part) << " + sqrt(" << format_rational(e.radicand)
      << ") * cos(2 pi * " << e.angle.turns().to_string() << ")\n";
  out << "       = " << hp::to_decimal(e.value) << "\n";
  if (cert.verdict.witness) out << "rational value: " << format_rational(*cert.verdict.witness) << "\n";
  for (const auto& line : cert.trace) out << "  " << line << "\n";

  if (auto path = output_path(cfg, "summary", "")) {
    json j = header(cfg);
    j["verdict"] = std::string(sphgeom::to_string(cert.verdict.kind));
    j["witness"] = cert.verdict.witness ? json(format_rational(*cert.verdict.witness)) : json(nullptr);
    j["cos_xz"] = {{"rational_part", format_rational(e.rational_part)},
                   {"radicand", format_rational(e.radicand)},
                   {"angle_turns", format_rational(e.angle.turns())},
                   {"value", hp::to_decimal(e.value)}};
    j["trace"] = cert.trace;
    art.add(*path, dump(j));
  }
  return kExitOk;
}

std::optional<Rational> optional_rational(const ExperimentConfig& cfg, std::string_view key) {
  const auto& v = cfg.get(key);
  if (v == "none") return std::nullopt;
  return Rational::parse(v);
}

int cmd_chsh_cert(const ExperimentConfig& cfg, std::ostream& out, ArtifactSet& art) {
  sphgeom::QuadSpec quad;
  quad.cos_x0y0 = Rational::parse(cfg.get("c00"));
  quad.cos_x0y1 = optional_rational(cfg, "c01");
  quad.cos_x1y0 = optional_rational(cfg, "c10");
  quad.cos_x1y1 = optional_rational(cfg, "c11");
  quad.cos_x0x1 = optional_rational(cfg, "cx");
  quad.cos_y0y1 = optional_rational(cfg, "cy");
  quad.alpha = RationalAngle::parse(cfg.get("alpha"));
  quad.beta = RationalAngle::parse(cfg.get("beta"));
  quad.gamma = RationalAngle::parse(cfg.get("gamma"));
  quad.delta = RationalAngle::parse(cfg.get("delta"));
  sphgeom::Edge realized;
  try {
    realized = sphgeom::parse_edge(cfg.get("realized"));
  } catch (const std::exception& ex) {
    throw ConfigError(ex.what());
  }
  if (!quad.cos(realized)) throw ConfigError("the realised edge needs a declared cosine");
  const auto cert = sphgeom::chsh_certify(quad, realized);
  json edges = json::object();
  for (const auto& ev : cert.edges) {
    out << fmt::format("{}: {}", sphgeom::to_string(ev.edge), sphgeom::to_string(ev.verdict.kind));
    if (ev.verdict.witness) out << " " << format_rational(*ev.verdict.witness);
    out << "\n";
    if (ev.numeric_value) out << "    " << hp::to_decimal(*ev.numeric_value, 50) << "\n";
    edges[std::string(sphgeom::to_string(ev.edge))] = {
        {"verdict", std::string(sphgeom::to_string(ev.verdict.kind))},
        {"witness", ev.verdict.witness ? json(format_rational(*ev.verdict.witness)) : json(nullptr)},
        {"numeric_value", ev.numeric_value ? json(hp::to_decimal(*ev.numeric_value)) : json(nullptr)}};
  }
  for (const auto& line : cert.trace) out << "  " << line << "\n";
  if (auto path = output_path(cfg, "summary", "")) {
    json j = header(cfg);
    j["edges"] = edges;
    j["trace"] = cert.trace;
    art.add(*path, dump(j));
  }
  return kExitOk;
}

int cmd_qubit(const ExperimentConfig& cfg, std::ostream& out, ArtifactSet& art) {
  const PrimeModulus p(cfg.get_u64("p"));
  const auto q = states::make_qubit(p, cfg.get_i64("m1"), cfg.get_i64("n1"));
  const auto stats = states::uncertainty_stats(q);
  const std::string row = states::bits_csv_row(q.bits());
  out << "born frequency = " << format_rational(states::born_frequency(q)) << "\n";
  out << "cos theta      = " << format_rational(q.cos_theta()) << "\n";
  out << "<x>, <y>       = " << format_rational(stats.mean_x) << ", " << format_rational(stats.mean_y) << "\n";
  out << "dSx * dSy      = " << hp::to_decimal(stats.product_lhs, 30) << "\n";
  out << "|<Sz>| / 2     = " << hp::to_decimal(stats.bound_rhs, 30) << "\n";
  out << "holds = " << (stats.inequality_holds ? "true" : "false")
      << "  equality = " << (stats.equality ? "true" : "false") << "\n";
  if (auto path = output_path(cfg, "out", "")) {
    art.add(*path, row + "\n");
  } else if (q.length() <= 64) {
    out << row << "\n";
  }
  return kExitOk;
}

int cmd_singlet(const ExperimentConfig& cfg, std::ostream& out, ArtifactSet& art) {
  const PrimeModulus p(cfg.get_u64("p"));
  const auto ens = states::singlet_ensemble(p, cfg.get_i64("m"));
  const Rational c = ens.correlation();
  out << "cos theta   = " << format_rational(ens.cos_theta()) << "\n";
  out << "correlation = " << format_rational(c) << " (" << format_decimal(c.to_double()) << ")\n";
  if (auto path = output_path(cfg, "out", "")) {
    std::string csv = "i,alice,bob\n";
    for (std::size_t i = 0; i < ens.alice.size(); ++i) {
      csv += fmt::format("{},{},{}\n", i, static_cast<int>(ens.alice[i]), static_cast<int>(ens.bob[i]));
    }
    art.add(*path, csv);
  }
  return kExitOk;
}

int cmd_butterfly(const ExperimentConfig& cfg, std::ostream& out, ArtifactSet& art) {
  chaos::ButterflyParams bp;
  bp.l = cfg.get_double("l");
  bp.R = cfg.get_double("R");
  bp.tau = cfg.get_double("tau");
  bp.G = cfg.get_double("G");
  bp.m_source = cfg.get_double("m_source");
  bp.deltaR = cfg.get_double("deltaR");
  bp.r = cfg.get_double("r");
  try {
    bp.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  const auto g = chaos::grav_perturbation(bp);
  const double log_theta1 =
      cfg.get("log10_dtheta1") == "auto" ? g.log10_delta_theta1 : cfg.get_double("log10_dtheta1");
  const double log_target = cfg.get_double("log10_target");
  const std::uint64_t m_until = chaos::collisions_until(bp, log_theta1, log_target);

  out << fmt::format("log10 delta_a = {}\nlog10 dtheta_1 = {}\ncollisions until 10^{} rad: {}\n",
                     format_decimal(g.log10_delta_a), format_decimal(log_theta1), format_decimal(log_target),
                     m_until);
  std::string csv = "M,log10_dtheta_M\n";
  for (std::uint64_t m = 0; m <= m_until; ++m) {
    const std::string v = format_decimal(chaos::collision_growth(bp, m, log_theta1));
    csv += fmt::format("{},{}\n", m, v);
    out << fmt::format("{:>4}  {}\n", m, v);
  }
  if (auto path = output_path(cfg, "out", "")) art.add(*path, csv);
  return kExitOk;
}

int cmd_lorenz(const ExperimentConfig& cfg, std::ostream& out, ArtifactSet& art) {
  chaos::LorenzParams lp;
  lp.sigma = cfg.get_double("sigma");
  lp.rho = cfg.get_double("rho");
  lp.beta = cfg.get_double("lorenz_beta");
  lp.dt = cfg.get_double("dt");
  lp.steps = cfg.get_u64("steps");
  try {
    lp.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  const chaos::State init{cfg.get_double("x0"), cfg.get_double("y0"), cfg.get_double("z0")};
  const auto traj = chaos::lorenz_integrate(init, lp);
  const double ball = cfg.get_double("ball");
  const auto coarse = chaos::coarse_grain_stats(traj, {ball, {0, 0, 0}});
  const auto fine = chaos::coarse_grain_stats(traj, {ball / 2, {0, 0, 0}});
  const double lyap = chaos::lyapunov_exponent(init, lp);
  const double rel_z = std::abs(fine.global_mean[2] - coarse.global_mean[2]) / std::abs(coarse.global_mean[2]);

  out << fmt::format("largest Lyapunov exponent = {}\n", format_decimal(lyap));
  out << fmt::format("coarse mean z at ball {} = {} ({} bins); at {} = {} ({} bins); relative change {}\n",
                     format_decimal(ball), format_decimal(coarse.global_mean[2]), coarse.bins.size(),
                     format_decimal(ball / 2), format_decimal(fine.global_mean[2]), fine.bins.size(),
                     format_decimal(rel_z));

  auto mean_json = [](const chaos::CoarseStats& s) {
    return json{{"ball", format_decimal(s.spec.epsilon)},
                {"occupied_bins", s.bins.size()},
                {"mean", {format_decimal(s.global_mean[0]), format_decimal(s.global_mean[1]),
                          format_decimal(s.global_mean[2])}}};
  };
  json j = header(cfg);
  j["lyapunov"] = format_decimal(lyap);
  j["coarse"] = mean_json(coarse);
  j["refined"] = mean_json(fine);
  j["relative_change_z"] = format_decimal(rel_z);

  const std::uint64_t stride = cfg.get_u64("stride");
  if (auto path = output_path(cfg, "out", "lorenz_trajectory.csv")) {
    std::string csv = "t,x,y,z\n";
    for (std::size_t i = 0; i < traj.size(); i += stride) {
      csv += fmt::format("{},{},{},{}\n", format_decimal(static_cast<double>(i) * lp.dt), format_decimal(traj[i][0]),
                         format_decimal(traj[i][1]), format_decimal(traj[i][2]));
    }
    art.add(*path, std::move(csv));
  }
  if (auto path = output_path(cfg, "summary", "lorenz_stats.json")) art.add(*path, dump(j));
  return kExitOk;
}

}  // namespace

std::string run_log_csv(const std::vector<bell::RunRecord>& records) {
  std::string out = "run_id,x,y,m,cos_exact,outcome_a,outcome_b,def_xy,def_xy',def_x'y,def_x'y'\n";
  for (const auto& r : records) {
    out += fmt::format("{},{},{},{},{},{},{},{},{},{},{}\n", r.lambda.run_index, r.x, r.y, r.exact.m,
                       format_rational(r.exact.cos_realized), static_cast<int>(r.outcome_a),
                       static_cast<int>(r.outcome_b), bell::to_string(r.definedness[0]),
                       bell::to_string(r.definedness[1]), bell::to_string(r.definedness[2]),
                       bell::to_string(r.definedness[3]));
  }
  return out;
}

int run_command(const ExperimentConfig& cfg, std::ostream& out) {
  ArtifactSet art;
  int status = kExitOk;
  const std::string& c = cfg.command;
  if (c == "chsh" || c == "bell1964") {
    status = cmd_experiment(cfg, kind_of(c), out, art);
  } else if (c == "mi-report") {
    status = cmd_mi_report(cfg, out, art);
  } else if (c == "audit") {
    status = cmd_audit(cfg, out, art);
  } else if (c == "convergence") {
    status = cmd_convergence(cfg, out, art);
  } else if (c == "triangle") {
    status = cmd_triangle(cfg, out, art);
  } else if (c == "chsh-cert") {
    status = cmd_chsh_cert(cfg, out, art);
  } else if (c == "qubit") {
    status = cmd_qubit(cfg, out, art);
  } else if (c == "singlet") {
    status = cmd_singlet(cfg, out, art);
  } else if (c == "butterfly") {
    status = cmd_butterfly(cfg, out, art);
  } else if (c == "lorenz") {
    status = cmd_lorenz(cfg, out, art);
  } else {
    throw ConfigError("unknown command '" + c + "'");
  }
  art.commit();
  for (const auto& [path, content] : art.staged()) out << "wrote " << path.string() << "\n";
  return status;
}

}  // namespace raqm::cli
