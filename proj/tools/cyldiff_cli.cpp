// cyldiff: command-line front end. Every subcommand reads a RunConfig (file
// plus flag overrides, flags win) and writes fixed-name artifacts under --out.
// Exit codes: 0 pass, 1 statistical fail, 2 usage/config error, 3 runtime error.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cyldiff/arithmetic.hpp"
#include "cyldiff/config.hpp"
#include "cyldiff/errors.hpp"
#include "cyldiff/mc_engine.hpp"
#include "cyldiff/normal_form.hpp"
#include "cyldiff/potentials.hpp"
#include "cyldiff/stats.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace cyldiff;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitStatFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitRuntime = 3;

struct Overrides {
  std::optional<std::string> config;
  std::optional<double> epsilon, s, beta;
  std::optional<std::size_t> samples;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<unsigned> threads;
  std::optional<double> r_min, r_max;
  std::optional<int> grid;
};

void add_common(CLI::App* sub, Overrides& o) {
  sub->add_option("--config", o.config, "JSON run configuration")->check(CLI::ExistingFile);
  sub->add_option("--epsilon", o.epsilon, "perturbation size eps");
  sub->add_option("--s", o.s, "macroscopic time; n = round(s / eps^2)");
  sub->add_option("--samples", o.samples, "number of trajectories M");
  sub->add_option("--seed", o.seed, "master RNG seed");
  sub->add_option("--beta", o.beta, "resonance mollifier width");
  sub->add_option("--out", o.out, "output directory (created if missing)");
  sub->add_option("--threads", o.threads, "worker threads, 0 = all cores (never affects outputs)");
}

void add_range(CLI::App* sub, Overrides& o) {
  sub->add_option("--r-min", o.r_min, "lower end of the r-range");
  sub->add_option("--r-max", o.r_max, "upper end of the r-range");
  sub->add_option("--grid", o.grid, "number of r grid points");
}

RunConfig resolve(const Overrides& o) {
  RunConfig cfg = o.config ? load_config(*o.config) : RunConfig{};
  if (o.epsilon) cfg.epsilon = *o.epsilon;
  if (o.s) cfg.s = *o.s;
  if (o.samples) cfg.samples = *o.samples;
  if (o.seed) cfg.seed = *o.seed;
  if (o.beta) cfg.beta = *o.beta;
  if (o.out) cfg.out = *o.out;
  if (o.threads) cfg.threads = *o.threads;
  if (o.r_min) cfg.range.lo = *o.r_min;
  if (o.r_max) cfg.range.hi = *o.r_max;
  if (o.grid) cfg.grid = *o.grid;
  if (!(cfg.range.hi > cfg.range.lo)) throw ConfigError("range: need r-min < r-max");
  if (cfg.grid < 2) throw ConfigError("grid: must be at least 2");
  if (cfg.samples < 1) throw ConfigError("samples: must be at least 1");
  // Admissibility checks happen here so that bad inputs exit with code 2.
  try {
    (void)cfg.map_system();
    (void)NormalForm(cfg.potentials, {cfg.beta});
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  (void)cfg.strip_params();
  std::error_code ec;
  fs::create_directories(cfg.out, ec);
  if (ec) throw IOFailure("cannot create output directory " + cfg.out + ": " + ec.message());
  return cfg;
}

std::string num(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string out_path(const RunConfig& cfg, const std::string& name) { return (fs::path(cfg.out) / name).string(); }

void write_json(const std::string& path, const json& j) {
  std::ofstream os(path);
  if (!os) throw IOFailure("cannot open " + path + " for writing");
  os << j.dump(2) << '\n';
  if (!os) throw IOFailure("write failed for " + path);
}

std::ofstream open_csv(const std::string& path, const std::string& header) {
  std::ofstream os(path);
  if (!os) throw IOFailure("cannot open " + path + " for writing");
  os << header << '\n';
  return os;
}

json base_params(const RunConfig& cfg) {
  return {{"epsilon", cfg.epsilon}, {"s", cfg.s}, {"beta", cfg.beta}, {"a", cfg.a}, {"smoothness", cfg.smoothness}};
}

json witness_json(const std::optional<Rational>& w) {
  if (!w) return nullptr;
  return {{"p", w->p}, {"q", w->q}};
}

EnsembleSpec ensemble_spec(const RunConfig& cfg) {
  EnsembleSpec spec{cfg.map_system(), cfg.initial, cfg.s, cfg.samples, cfg.seed, cfg.threads};
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return spec;
}

// Drift and variance tabulated over the nonresonant points of the config grid.
DiffusionCoeffs tabulated_coeffs(const RunConfig& cfg, Interval range) {
  const NormalForm nf(cfg.potentials, {cfg.beta});
  std::vector<double> rs, bs, ss;
  for (int i = 0; i < cfg.grid; ++i) {
    const double r = range.lo + (range.hi - range.lo) * i / (cfg.grid - 1);
    if (nf.resonance_within(r, cfg.beta)) continue;
    rs.push_back(r);
    bs.push_back(nf.drift(r));
    ss.push_back(nf.sigma2(r));
  }
  if (rs.empty()) throw ResonantInput("every grid point lies within beta of a resonance");
  return DiffusionCoeffs::tabulated(rs, bs, ss);
}

int cmd_check(const RunConfig& cfg) {
  const HypothesisReport rep = check_hypotheses(cfg.potentials, cfg.range);
  json hyps = json::array();
  for (const auto& h : rep.results)
    hyps.push_back({{"name", h.name},
                    {"pass", h.pass},
                    {"required", h.required},
                    {"detail", h.detail},
                    {"witnesses", h.witnesses}});
  const bool pass = rep.required_pass();
  const auto failed = rep.failed_required();
  write_json(out_path(cfg, "hypotheses.json"), {{"test", "check"},
                                                {"pass", pass},
                                                {"range", {cfg.range.lo, cfg.range.hi}},
                                                {"failed_required", failed},
                                                {"hypotheses", hyps}});
  if (pass) {
    std::cout << "check: PASS (required hypotheses hold)\n";
    return kExitPass;
  }
  std::string names;
  for (const auto& n : failed) names += (names.empty() ? "" : ", ") + n;
  std::cout << "check: FAIL (" << names << ")\n";
  return kExitStatFail;
}

int cmd_simulate(const RunConfig& cfg, bool write_csv) {
  const EnsembleSpec spec = ensemble_spec(cfg);
  const EnsembleResult res = run_ensemble(spec);
  const Moments m = moments(res.displacement);
  json p = base_params(cfg);
  p["n"] = res.n;
  write_json(out_path(cfg, "summary.json"), {{"test", "simulate"},
                                            {"M", res.displacement.size()},
                                            {"seed", res.seed},
                                            {"n", res.n},
                                            {"mean", m.mean},
                                            {"variance", m.variance},
                                            {"skewness", m.skewness},
                                            {"excess_kurtosis", m.excess_kurtosis},
                                            {"omega_sum", res.omega_sum},
                                            {"rng_scheme", res.scheme},
                                            {"params", p}});
  if (write_csv) {
    auto os = open_csv(out_path(cfg, "displacements.csv"), "index,theta0,r0,theta_n,r_n,displacement");
    for (std::size_t i = 0; i < res.displacement.size(); ++i)
      os << i << ',' << num(res.initial[i].theta) << ',' << num(res.initial[i].r) << ','
         << num(res.final_state[i].theta) << ',' << num(res.final_state[i].r) << ',' << num(res.displacement[i])
         << '\n';
    if (!os) throw IOFailure("write failed for displacements.csv");
  }
  std::cout << "simulate: M=" << res.displacement.size() << " n=" << res.n << " mean=" << num(m.mean)
            << " variance=" << num(m.variance) << '\n';
  return kExitPass;
}

struct CltOptions {
  std::optional<double> ref_b, ref_sigma2;
  std::size_t bins = 50;
  std::optional<double> hist_lo, hist_hi;
};

int cmd_clt(const RunConfig& cfg, const CltOptions& opt) {
  const EnsembleSpec spec = ensemble_spec(cfg);
  // Reference coefficients: averaged over the nonresonant initial r-range,
  // or evaluated at the fixed initial r.
  double b = 0.0, sigma2 = 0.0;
  if (!opt.ref_b || !opt.ref_sigma2) {
    const NormalForm nf(cfg.potentials, {cfg.beta});
    if (cfg.initial.mode == InitialMode::UniformTorus) {
      const DiffusionCoeffs dc = tabulated_coeffs(cfg, {cfg.initial.r_lo, cfg.initial.r_hi});
      const int n = 4096;
      for (int i = 0; i < n; ++i) {
        const double r = cfg.initial.r_lo + (cfg.initial.r_hi - cfg.initial.r_lo) * (i + 0.5) / n;
        b += dc.b(r) / n;
        sigma2 += nf.sigma2(r) / n;
      }
    } else {
      b = nf.drift(cfg.initial.r);
      sigma2 = nf.sigma2(cfg.initial.r);
    }
  }
  if (opt.ref_b) b = *opt.ref_b;
  if (opt.ref_sigma2) sigma2 = *opt.ref_sigma2;

  const EnsembleResult res = run_ensemble(spec);
  CltResult clt = clt_test(res.displacement, cfg.s, b, sigma2, cfg.seed);
  const double sd = std::sqrt(clt.ref_variance);
  HistogramSpec hs;
  hs.bins = opt.bins;
  hs.lo = opt.hist_lo.value_or(clt.ref_mean - 5.0 * sd);
  hs.hi = opt.hist_hi.value_or(clt.ref_mean + 5.0 * sd);
  emit_histogram(res.displacement, hs, out_path(cfg, "histogram.csv"), clt.ref_mean, clt.ref_variance);

  json p = clt.report.params;
  const json base = base_params(cfg);
  for (auto it = base.begin(); it != base.end(); ++it) p[it.key()] = it.value();
  p["n"] = res.n;
  p["anderson_darling"] = clt.anderson_darling;
  p["rng_scheme"] = res.scheme;
  clt.report.params = p;
  write_json(out_path(cfg, "clt_report.json"), to_json(clt.report));
  std::cout << "clt: " << (clt.report.pass ? "PASS" : "FAIL") << " ks=" << num(clt.ks)
            << " variance=" << num(clt.m.variance) << " ref=" << num(clt.ref_variance) << " mean=" << num(clt.m.mean)
            << '\n';
  return clt.report.pass ? kExitPass : kExitStatFail;
}

int cmd_drift(const RunConfig& cfg) {
  const NormalForm nf(cfg.potentials, {cfg.beta});
  auto os = open_csv(out_path(cfg, "drift.csv"), "r,b,sigma2");
  std::size_t rows = 0, skipped = 0;
  double max_b = 0.0;
  for (int i = 0; i < cfg.grid; ++i) {
    const double r = cfg.range.lo + (cfg.range.hi - cfg.range.lo) * i / (cfg.grid - 1);
    if (nf.resonance_within(r, cfg.beta)) {
      ++skipped;
      continue;
    }
    const double b = nf.drift(r);
    max_b = std::max(max_b, std::abs(b));
    os << num(r) << ',' << num(b) << ',' << num(nf.sigma2(r)) << '\n';
    ++rows;
  }
  if (!os) throw IOFailure("write failed for drift.csv");
  std::cout << "drift: " << rows << " rows, " << skipped << " resonant points skipped, max|b|=" << num(max_b) << '\n';
  return kExitPass;
}

int cmd_classify(const RunConfig& cfg) {
  const StripParams sp = cfg.strip_params();
  const auto strips = classify_range(cfg.range, sp, cfg.epsilon);
  auto os = open_csv(out_path(cfg, "strips.csv"), "r_lo,r_hi,class,p,q");
  std::size_t n_ti = 0, n_ir = 0, n_res = 0;
  double ir_length = 0.0;
  for (const auto& s : strips) {
    os << num(s.interval.lo) << ',' << num(s.interval.hi) << ',' << to_string(s.kind) << ',';
    if (s.witness) os << s.witness->p << ',' << s.witness->q;
    else os << ',';
    os << '\n';
    switch (s.kind) {
      case StripKind::TotallyIrrational: ++n_ti; break;
      case StripKind::ImaginaryRational:
        ++n_ir;
        ir_length += s.interval.hi - s.interval.lo;
        break;
      case StripKind::Resonant: ++n_res; break;
    }
  }
  if (!os) throw IOFailure("write failed for strips.csv");
  // Imaginary-rational strips only see rationals with q > 2d.
  const IrMeasure irm = ir_measure(sp, cfg.epsilon, cfg.range, 1.0, 2L * sp.d);
  write_json(out_path(cfg, "classify.json"),
             {{"test", "classify"},
              {"epsilon", cfg.epsilon},
              {"range", {cfg.range.lo, cfg.range.hi}},
              {"strip_width", std::pow(cfg.epsilon, sp.gamma)},
              {"counts", {{"TI", n_ti}, {"IR", n_ir}, {"resonant", n_res}}},
              {"ir_strip_length", ir_length},
              {"ir_measure", irm.measure},
              {"ir_bound", irm.bound},
              {"ir_rationals", irm.count},
              {"params", {{"l", sp.l}, {"d", sp.d}, {"gamma", sp.gamma}, {"nu", sp.nu}, {"rho", sp.rho},
                          {"b", sp.b}, {"tau", sp.tau}, {"beta", sp.beta}, {"kappa", sp.kappa}}}});
  std::cout << "classify: " << strips.size() << " strips (TI " << n_ti << ", IR " << n_ir << ", resonant " << n_res
            << "), IR measure " << num(irm.measure) << '\n';
  return kExitPass;
}

struct ExitOptions {
  double r_star = 0.5 * (std::sqrt(5.0) - 1.0);
  std::optional<double> gamma;
  double delta = 0.1;
  std::size_t n_max = 10000;
  double max_outside = 0.05;
};

int cmd_exits(const RunConfig& cfg, const ExitOptions& opt) {
  const StripParams sp = cfg.strip_params();
  const double gamma = opt.gamma.value_or(sp.gamma);
  const double w = std::pow(cfg.epsilon, gamma);
  // r* is the common boundary of two adjacent strips; trajectories start
  // there and stop near either outer boundary.
  const Interval strip{opt.r_star - w, opt.r_star + w};
  const StripClass lower = classify({strip.lo, opt.r_star}, sp, cfg.epsilon);
  const StripClass upper = classify({opt.r_star, strip.hi}, sp, cfg.epsilon);
  const ExitExperiment ex =
      exit_time_experiment(cfg.map_system(), strip, cfg.samples, cfg.seed, gamma, opt.delta, opt.n_max, cfg.threads);
  const bool pass = ex.boundary_exits > 0 && ex.outside_fraction <= opt.max_outside;
  TestReport rep{"exits", ex.outside_fraction, opt.max_outside, pass, cfg.samples, cfg.seed, base_params(cfg)};
  rep.params["gamma"] = gamma;
  rep.params["delta"] = opt.delta;
  rep.params["n_max"] = opt.n_max;
  rep.params["strip"] = {strip.lo, strip.hi};
  rep.params["class"] = {to_string(lower.kind), to_string(upper.kind)};
  rep.params["witness"] = {witness_json(lower.witness), witness_json(upper.witness)};
  rep.params["window"] = {ex.window_lo, ex.window_hi};
  rep.params["boundary_exits"] = ex.boundary_exits;
  rep.params["final_time"] = ex.final_time;
  rep.params["below"] = ex.below;
  rep.params["above"] = ex.above;
  write_json(out_path(cfg, "exits.json"), to_json(rep));
  auto os = open_csv(out_path(cfg, "exit_times.csv"), "trajectory,entry,exit,side,r_exit");
  for (const auto& r : ex.records)
    os << r.trajectory << ',' << r.entry << ',' << r.exit << ',' << to_string(r.side) << ',' << num(r.r_exit) << '\n';
  if (!os) throw IOFailure("write failed for exit_times.csv");
  std::cout << "exits: " << (pass ? "PASS" : "FAIL") << " strips " << to_string(lower.kind) << "/" << to_string(upper.kind)
            << " outside-window fraction " << num(ex.outside_fraction) << " (window [" << num(ex.window_lo) << ", "
            << num(ex.window_hi) << "])\n";
  return pass ? kExitPass : kExitStatFail;
}

struct WalkOptions {
  double A = 1.0;
  std::optional<std::size_t> n_steps;
  std::optional<std::size_t> trajectories;
  double lo = 0.46, hi = 0.54;
  std::size_t min_departures = 100;
};

int cmd_walk(const RunConfig& cfg, const WalkOptions& opt) {
  const StripParams sp = cfg.strip_params();
  const DiffusionCoeffs dc = tabulated_coeffs(cfg, cfg.range);
  const double scale = std::pow(cfg.epsilon, sp.gamma);
  const WalkLattice lat = calibrate_lattice(dc.b, dc.sigma2, opt.A, cfg.range, scale);
  const std::size_t n_steps =
      opt.n_steps.value_or(static_cast<std::size_t>(std::llround(cfg.s / (cfg.epsilon * cfg.epsilon))));
  const std::size_t traj = opt.trajectories.value_or(cfg.samples);
  const MapSystem sys = cfg.map_system();
  // Up-probabilities come from trajectories started exactly at each node; the
  // chained walk supplies visit counts for the imaginary-rational census.
  const NodeHitting hit = node_hitting(sys, lat, cfg.samples, n_steps, cfg.seed, cfg.threads);
  const WalkStats ws = walk_experiment(sys, lat, traj, n_steps, cfg.seed ^ 0x5741u, cfg.threads);
  const auto flagged = imaginary_rational_nodes(lat, sp, cfg.epsilon);
  const VisitCensus census = visit_census(ws, flagged);

  auto os = open_csv(out_path(cfg, "walk_nodes.csv"), "node,r,up,down,unresolved,p_up,walk_visits,ir");
  bool pass = true;
  std::size_t assessed = 0;
  double worst = 0.0;
  for (std::size_t j = 0; j < lat.nodes.size(); ++j) {
    const std::size_t dep = hit.up[j] + hit.down[j];
    const double p_up = dep ? static_cast<double>(hit.up[j]) / static_cast<double>(dep) : 0.0;
    os << j << ',' << num(lat.nodes[j]) << ',' << hit.up[j] << ',' << hit.down[j] << ',' << hit.unresolved[j] << ','
       << (dep ? num(p_up) : "") << ',' << ws.visits[j] << ',' << (flagged[j] ? 1 : 0) << '\n';
    if (j == 0 || j + 1 == lat.nodes.size() || dep < opt.min_departures) continue;
    ++assessed;
    worst = std::max(worst, std::abs(p_up - 0.5));
    if (p_up < opt.lo || p_up > opt.hi) pass = false;
  }
  if (!os) throw IOFailure("write failed for walk_nodes.csv");
  if (assessed == 0) pass = false;
  TestReport rep{"walk", worst, 0.5 - opt.lo, pass, cfg.samples, cfg.seed, base_params(cfg)};
  rep.params["A"] = opt.A;
  rep.params["spacing_scale"] = scale;
  rep.params["n_steps"] = n_steps;
  rep.params["nodes"] = lat.nodes.size();
  rep.params["assessed_nodes"] = assessed;
  rep.params["min_departures"] = opt.min_departures;
  rep.params["walk_trajectories"] = traj;
  rep.params["census"] = {{"total_visits", census.total_visits},
                          {"ir_visits", census.flagged_visits},
                          {"visit_fraction", census.visit_fraction},
                          {"node_fraction", census.node_fraction}};
  write_json(out_path(cfg, "walk.json"), to_json(rep));
  std::cout << "walk: " << (pass ? "PASS" : "FAIL") << " " << assessed << " nodes assessed, max|p_up - 1/2|="
            << num(worst) << '\n';
  return pass ? kExitPass : kExitStatFail;
}

struct ErgodizeOptions {
  double r_star = 0.5 * (std::sqrt(5.0) - 1.0);
  double theta_star = 0.0;
};

int cmd_ergodize(const RunConfig& cfg, const ErgodizeOptions& opt) {
  const StripParams sp = cfg.strip_params();
  const Ergodization e = ergodization_time(opt.r_star, sp, cfg.epsilon);
  const double dev = birkhoff_deviation(cfg.potentials.v_plus, opt.theta_star, opt.r_star, e.N);
  write_json(out_path(cfg, "ergodize.json"), {{"test", "ergodize"},
                                              {"epsilon", cfg.epsilon},
                                              {"r_star", opt.r_star},
                                              {"theta_star", opt.theta_star},
                                              {"N", e.N},
                                              {"p", e.p},
                                              {"bound", e.bound},
                                              {"residual", e.residual},
                                              {"deviation", dev},
                                              {"eps_tau", std::pow(cfg.epsilon, sp.tau)}});
  std::cout << "ergodize: N=" << e.N << " deviation=" << num(dev) << '\n';
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Random cylinder maps: hypotheses, normal form, strips and Monte Carlo diffusion tests"};
  app.require_subcommand(1);
  Overrides o;

  auto* check = app.add_subcommand("check", "verify hypotheses H0-H5; writes hypotheses.json");
  add_common(check, o);
  add_range(check, o);

  bool no_csv = false;
  auto* simulate = app.add_subcommand("simulate", "run an ensemble; writes summary.json and displacements.csv");
  add_common(simulate, o);
  simulate->add_flag("--no-displacements", no_csv, "skip displacements.csv");

  CltOptions clt_opt;
  auto* clt = app.add_subcommand("clt", "ensemble CLT test; writes clt_report.json, histogram.csv/.json");
  add_common(clt, o);
  clt->add_option("--ref-b", clt_opt.ref_b, "reference drift (default: from the normal form)");
  clt->add_option("--ref-sigma2", clt_opt.ref_sigma2, "reference variance (default: from the normal form)");
  clt->add_option("--bins", clt_opt.bins, "histogram bins")->check(CLI::PositiveNumber);
  clt->add_option("--hist-lo", clt_opt.hist_lo, "histogram lower edge (default mean - 5 sd)");
  clt->add_option("--hist-hi", clt_opt.hist_hi, "histogram upper edge (default mean + 5 sd)");

  auto* drift = app.add_subcommand("drift", "tabulate b(r) and sigma^2(r); writes drift.csv");
  drift->alias("nf");
  add_common(drift, o);
  add_range(drift, o);

  auto* cls = app.add_subcommand("classify", "strip classification; writes strips.csv and classify.json");
  add_common(cls, o);
  add_range(cls, o);

  ExitOptions ex_opt;
  auto* exits = app.add_subcommand("exits", "strip exit times; writes exits.json and exit_times.csv");
  add_common(exits, o);
  exits->add_option("--r-star", ex_opt.r_star, "boundary between the two strips (default golden mean)");
  exits->add_option("--gamma", ex_opt.gamma, "strip width exponent (default strips.gamma)");
  exits->add_option("--delta", ex_opt.delta, "window slack exponent");
  exits->add_option("--n-max", ex_opt.n_max, "step cap per trajectory");
  exits->add_option("--max-outside", ex_opt.max_outside, "pass threshold on the outside-window fraction");

  WalkOptions walk_opt;
  auto* walk = app.add_subcommand("walk", "calibrated lattice walk; writes walk.json and walk_nodes.csv");
  add_common(walk, o);
  add_range(walk, o);
  walk->add_option("--A", walk_opt.A, "first lattice spacing in units of eps^gamma")->check(CLI::PositiveNumber);
  walk->add_option("--n-steps", walk_opt.n_steps, "steps per trajectory (default round(s / eps^2))");
  walk->add_option("--trajectories", walk_opt.trajectories, "chained-walk trajectories for the visit census (default --samples)");
  walk->add_option("--min-departures", walk_opt.min_departures, "resolved samples needed to assess a node");

  ErgodizeOptions erg_opt;
  auto* erg = app.add_subcommand("ergodize", "ergodization time at r*; writes ergodize.json");
  add_common(erg, o);
  erg->add_option("--r-star", erg_opt.r_star, "rotation number (default golden mean)");
  erg->add_option("--theta-star", erg_opt.theta_star, "starting angle");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitPass : kExitUsage;
  }

  const CLI::App* sub = app.get_subcommands().front();
  const std::string name = sub->get_name();
  try {
    const RunConfig cfg = resolve(o);
    if (sub == check) return cmd_check(cfg);
    if (sub == simulate) return cmd_simulate(cfg, !no_csv);
    if (sub == clt) return cmd_clt(cfg, clt_opt);
    if (sub == drift) return cmd_drift(cfg);
    if (sub == cls) return cmd_classify(cfg);
    if (sub == exits) return cmd_exits(cfg, ex_opt);
    if (sub == walk) return cmd_walk(cfg, walk_opt);
    return cmd_ergodize(cfg, erg_opt);
  } catch (const ConfigError& e) {
    std::cerr << name << ": config error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << name << ": " << e.what() << '\n';
    return kExitRuntime;
  }
}
