#include "fraccert/app.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "fraccert/certify.hpp"
#include "fraccert/covering.hpp"
#include "fraccert/errors.hpp"
#include "fraccert/fraclap.hpp"
#include "fraccert/grid.hpp"
#include "fraccert/heatkernel.hpp"
#include "fraccert/riesz.hpp"
#include "fraccert/solver.hpp"

namespace fraccert::app {

using nlohmann::json;

namespace {

std::string fmt(double v, int prec = 6) {
  std::ostringstream os;
  os << std::setprecision(prec) << v;
  return os.str();
}

std::string csv_line(const std::vector<double>& v) {
  std::ostringstream os;
  os << std::setprecision(17);
  for (size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << '\n';
  return os.str();
}

// ---------------------------------------------------------------------------
// config access

double num(const json& c, const std::string& key) {
  const auto it = c.find(key);
  if (it == c.end() || !it->is_number()) throw ConfigError("config key '" + key + "' must be a number");
  return it->get<double>();
}

int integer(const json& c, const std::string& key) {
  const double v = num(c, key);
  if (v != std::floor(v) || std::abs(v) > 1e9) throw ConfigError("config key '" + key + "' must be an integer");
  return static_cast<int>(v);
}

bool boolean(const json& c, const std::string& key) {
  const auto it = c.find(key);
  if (it == c.end() || !it->is_boolean()) throw ConfigError("config key '" + key + "' must be true or false");
  return it->get<bool>();
}

std::string text(const json& c, const std::string& key) {
  const auto it = c.find(key);
  if (it == c.end() || !it->is_string()) throw ConfigError("config key '" + key + "' must be a string");
  return it->get<std::string>();
}

std::vector<double> list(const json& c, const std::string& key) {
  const auto it = c.find(key);
  if (it == c.end() || !it->is_array() || it->empty()) throw ConfigError("config key '" + key + "' must be a nonempty list");
  std::vector<double> v;
  for (const auto& e : *it) {
    if (!e.is_number()) throw ConfigError("config key '" + key + "' must hold numbers");
    v.push_back(e.get<double>());
  }
  return v;
}

void positive(const json& c, const std::string& key) {
  const double v = num(c, key);
  if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(key + " must be positive (got " + fmt(v) + ")");
}

void positive_list(const json& c, const std::string& key) {
  for (double v : list(c, key))
    if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(key + " entries must be positive (got " + fmt(v) + ")");
}

void fractional(const json& c, const std::string& key) {
  const double v = num(c, key);
  if (!(v > 0.0 && v < 1.0)) throw ConfigError(key + " must lie in (0, 1) (got " + fmt(v) + ")");
}

void dimension(const json& c) {
  const int N = integer(c, "N");
  if (N < 1) throw ConfigError("N must be at least 1 (got " + std::to_string(N) + ")");
}

void power_of_two(const json& c, const std::string& key) {
  const int M = integer(c, key);
  if (M < 4 || (M & (M - 1)) != 0) throw ConfigError(key + " must be a power of two >= 4 (got " + std::to_string(M) + ")");
}

FracOrder order(const json& c) { return {num(c, "s"), integer(c, "N")}; }

DensityModel density(const json& c) {
  DensityModel d;
  d.K = num(c, "K");
  d.alpha = num(c, "alpha");
  d.log_correction = boolean(c, "log_correction");
  return d;
}

// ---------------------------------------------------------------------------
// report pieces

json to_json(const Thresholds& t) {
  return {{"case", to_string(t.label)}, {"epsilon", t.epsilon}, {"R_epsilon", t.R_epsilon}, {"C", t.C},
          {"C_calibrated", t.Cv}, {"M", t.M}, {"outer", t.outer}, {"inner", t.inner},
          {"lambda_min", t.lambda_min}, {"elliptic_min", t.elliptic_min}};
}

json to_json(const CertificateReport& r) {
  return {{"kind", r.kind}, {"case", to_string(r.case_label)}, {"thresholds", to_json(r.thresholds)},
          {"parameter", r.parameter}, {"grid_min_parameter", r.grid_min_parameter}, {"margin", r.margin},
          {"worst_scaled", r.worst_scaled}, {"comparability_C", r.comparability_C}, {"notes", r.notes},
          {"pass", r.pass}};
}

json to_json(const DecayFit& f) {
  return {{"exponent", f.exponent}, {"intercept", f.intercept}, {"max_residual", f.max_residual}};
}

// ---------------------------------------------------------------------------
// commands

Outcome run_flap(const json& c) {
  Outcome o;
  const int N = integer(c, "N");
  if (N != 1) throw ConfigError("flap compares three evaluators on the line; N must be 1");
  const double rmax = num(c, "r_max");
  const double step = num(c, "r_step");
  const double tol = num(c, "tol");
  PeriodicGrid g{1, integer(c, "spectral_M"), num(c, "spectral_L")};
  if (rmax >= 0.5 * g.L) throw ConfigError("r_max must be below half the spectral box");
  const double h = g.h();
  if (std::abs(step / h - std::round(step / h)) > 1e-9) throw ConfigError("r_step must be a multiple of the grid step");
  const ScalarField u = gaussian_field(1);
  const GridField ug = GridField::sample(g, u);
  bool pass = true;
  json rows = json::array();
  for (double s : list(c, "s_values")) {
    if (!(s > 0.0 && s < 1.0)) throw ConfigError("s_values entries must lie in (0, 1) (got " + fmt(s) + ")");
    const FracOrder fo{s, 1};
    const GridField sp = flap_spectral(ug, fo);
    std::string csv = "r,closed_form,pv_quadrature,spectral,max_rel_err\n";
    double worst = 0.0;
    for (int i = 0;; ++i) {
      const double r = i * step;
      if (r > rmax + 1e-12) break;
      const double cf = gaussian_flap_closed_form(fo, r);
      const double pv = flap_pv(u, Point{r}, fo, num(c, "pv_tol")).value;
      const auto idx = static_cast<std::size_t>(std::llround((r + g.L) / h));
      const double spv = sp.values[idx];
      const double err = std::max({std::abs(cf - pv), std::abs(cf - spv), std::abs(pv - spv)}) / std::abs(cf);
      worst = std::max(worst, err);
      csv += csv_line({r, cf, pv, spv, err});
    }
    const bool ok = worst <= tol;
    pass = pass && ok;
    rows.push_back({{"s", s}, {"max_rel_err", worst}, {"pass", ok}});
    o.files.emplace_back("flap_s" + fmt(s) + ".csv", csv);
    o.summary.push_back("s = " + fmt(s) + ": max pairwise relative error " + fmt(worst, 3) + (ok ? " PASS" : " FAIL"));
  }
  o.report["results"] = rows;
  o.pass = pass;
  return o;
}

Outcome run_kernel(const json& c) {
  Outcome o;
  const FracOrder fo = order(c);
  const KernelProfile kp(fo);
  std::string csv = "r,profile\n";
  for (int i = 0; i <= 400; ++i) {
    const double r = num(c, "table_max") * i / 400.0;
    csv += csv_line({r, kp.profile(r)});
  }
  o.files.emplace_back("kernel_profile.csv", csv);
  std::vector<double> xs;
  const double xmax = num(c, "x_max");
  const int nx = integer(c, "x_points");
  for (int i = 0; i < nx; ++i) xs.push_back(xmax * std::pow(1e-4, 1.0 - static_cast<double>(i) / (nx - 1)));
  xs.insert(xs.begin(), 0.0);
  const BoundReport b = bound_check(kp, xs, list(c, "t_values"), num(c, "spread_limit"));
  const double mass_err = std::abs(kp.mass() - 1.0);
  o.pass = b.pass && mass_err <= num(c, "tol");
  o.report["results"] = {{"mass", kp.mass()},       {"mass_error", mass_err},    {"min_ratio", b.min_ratio},
                         {"max_ratio", b.max_ratio}, {"spread", b.spread},        {"C", b.C},
                         {"bound_pass", b.pass},     {"edge_mismatch", kp.edge_mismatch()}};
  o.summary.push_back("kernel mass " + fmt(kp.mass(), 12) + ", bound spread " + fmt(b.spread, 4) +
                      (o.pass ? " PASS" : " FAIL"));
  return o;
}

ProblemSpec problem(const json& c) {
  ProblemSpec spec;
  spec.fo = order(c);
  spec.density = density(c);
  spec.beta = num(c, "beta");
  spec.p = num(c, "p");
  return spec;
}

Outcome run_certify(const json& c) {
  Outcome o;
  ProblemSpec spec = problem(c);
  const std::string mode = text(c, "mode");
  spec.T = 1.0;
  spec.validate();
  const Thresholds th = default_thresholds(spec);
  CertificateReport rep;
  if (mode == "parabolic") {
    spec.T = num(c, "T");
    const double lambda = c["lambda"].is_null() ? num(c, "factor") * th.lambda_min : num(c, "lambda");
    rep = verify_parabolic(spec, lambda, {}, {});
  } else {
    spec.T.reset();
    spec.c0 = c["c0"].is_null() ? num(c, "factor") * th.elliptic_min / (spec.p * spec.density.K) : num(c, "c0");
    rep = verify_elliptic(spec);
  }
  std::string csv = "r,t,residual,scale\n";
  for (const auto& n : rep.nodes) csv += csv_line({n.r, n.t, n.residual, n.scale});
  o.files.emplace_back("residuals.csv", csv);
  o.report["results"] = to_json(rep);
  o.pass = rep.pass;
  o.summary.push_back("case " + to_string(rep.case_label) + ", " + mode + " parameter " + fmt(rep.parameter) +
                      " (analytic threshold " +
                      fmt(mode == "parabolic" ? rep.thresholds.lambda_min : rep.thresholds.elliptic_min) + ")" +
                      (rep.pass ? " PASS" : " FAIL"));
  return o;
}

Outcome run_covering(const json& c) {
  Outcome o;
  const FracOrder fo = order(c);
  const double beta = num(c, "beta");
  const int N = fo.N;
  const ScalarField u = ScalarField::from_radial(
      N, [beta, N](double r) { return std::pow(1.0 + r * r, -0.5 * (beta + N)); }, DecayClass::POWER, beta + N,
      std::pow(2.0, 0.5 * (beta + N)), 0.0, 1.0, "u");
  const ScalarField phi = weight_field(N, beta);
  RemainderOptions opt;
  opt.tol = num(c, "tol");
  opt.mc_samples = static_cast<long>(num(c, "mc_samples"));
  opt.seed = static_cast<std::uint64_t>(num(c, "seed"));
  const CoveringScan sc = covering_scan(u, phi, list(c, "R_values"), fo, beta, opt);
  std::string csv = "R,total,A1,A2,A3,A4,A5,cutoff_term\n";
  for (const auto& r : sc.reports) {
    std::vector<double> row{r.R, r.total};
    for (const auto& v : r.regions) row.push_back(v.value);
    row.push_back(r.cutoff_term);
    csv += csv_line(row);
  }
  o.files.emplace_back("covering.csv", csv);
  json fits = json::object();
  for (int k = 0; k < 5; ++k)
    fits["A" + std::to_string(k + 1)] = {{"raw", to_json(sc.raw_fits[k])}, {"shell", to_json(sc.shell_fits[k])}};
  o.pass = sc.monotone && sc.total_fit.exponent < 0.0;
  o.report["results"] = {{"fits", fits},
                         {"total_fit", to_json(sc.total_fit)},
                         {"monotone", sc.monotone},
                         {"final_over_initial", sc.final_over_initial},
                         {"monte_carlo", !sc.reports.empty() && sc.reports.front().monte_carlo}};
  o.summary.push_back("I(R) fitted exponent " + fmt(sc.total_fit.exponent, 4) + ", final/initial " +
                      fmt(sc.final_over_initial, 4) + (o.pass ? " PASS" : " FAIL"));
  return o;
}

Outcome run_riesz(const json& c) {
  Outcome o;
  const FracOrder fo = order(c);
  const ScalarField F = bump_field(fo.N, num(c, "bump_radius"), num(c, "bump_height"));
  const RieszResult r = riesz_potential(F, fo);
  std::string csv = "x,phi\n";
  for (int i = 0; i <= 200; ++i) {
    const double x = num(c, "table_max") * i / 200.0;
    csv += csv_line({x, r.phi(Point{x})});
  }
  o.files.emplace_back("riesz_potential.csv", csv);
  const double rtol = num(c, "tol");
  bool pass = r.residual <= rtol && r.positive && r.C0 > 0.0 && std::isfinite(r.C1);
  json far = json::array();
  for (const auto& [x, v] : r.far_field) far.push_back({{"x", x}, {"ratio", v}});
  json res = {{"k", r.k},         {"k_classical", r.k_classical},
              {"residual", r.residual}, {"residual_classical", r.residual_classical},
              {"mass", r.mass},   {"far_field", far},
              {"C0", r.C0},       {"C1", r.C1},
              {"positive", r.positive}};
  o.summary.push_back("inversion residual " + fmt(r.residual, 3) + ", k = " + fmt(r.k, 10) + " (classical " +
                      fmt(r.k_classical, 10) + "), C0 = " + fmt(r.C0, 4) + ", C1 = " + fmt(r.C1, 4));
  if (boolean(c, "lemma42")) {
    DensityModel d = density(c);
    const Lemma42Report L = lemma42_check(r, d, num(c, "beta"), list(c, "R_values"), num(c, "sigma"));
    res["lemma42"] = {{"sigma", L.sigma}, {"sups", L.sups},        {"far_field", L.far_field},
                      {"spread", L.spread}, {"notes", L.notes},   {"pass", L.pass}};
    pass = pass && L.pass;
    o.summary.push_back("scaled sup spread across R " + fmt(L.spread, 4) + (L.pass ? " PASS" : " FAIL"));
  }
  o.report["results"] = res;
  o.pass = pass;
  return o;
}

ScalarField initial_field(const json& c, int N) {
  const std::string name = text(c, "u0");
  if (name == "gaussian") return gaussian_field(N, num(c, "u0_width"));
  if (name == "bump") return bump_field(N, num(c, "u0_width"));
  throw ConfigError("u0 must be 'gaussian' or 'bump' (got '" + name + "')");
}

Outcome run_simulate(const json& c) {
  Outcome o;
  const FracOrder fo = order(c);
  if (fo.N > 2) throw ConfigError("simulate supports N = 1 or 2");
  const PeriodicGrid g{fo.N, integer(c, "M"), num(c, "L")};
  const GridField u0 = GridField::sample(g, initial_field(c, fo.N));
  const DensityModel d = density(c);
  const double T = num(c, "T");
  double dt = c["dt"].is_null() ? 0.0 : num(c, "dt");
  const bool constant = d.alpha == 0.0 && !d.log_correction;
  if (dt == 0.0) dt = constant ? T / 10.0 : std::min(T, 0.9 * stable_step(u0, d, fo));
  EvolveOptions eo;
  eo.store_every = integer(c, "store_every");
  const Trajectory traj = evolve(u0, d, fo, T, dt, eo);
  o.files.emplace_back("trajectory.csv", trajectory_csv(traj));
  const double p = num(c, "p");
  const auto energy = energy_monitor(traj, d, [](const Point&, double) { return 1.0; }, p);
  bool monotone = true;
  for (size_t k = 1; k < energy.size(); ++k)
    if (energy[k] > energy[k - 1] + 1e-12 * energy.front()) monotone = false;
  json res = {{"trajectory", trajectory_metadata(traj)},
              {"energy", energy},
              {"energy_nonincreasing", monotone},
              {"weighted_norm", weighted_lp_norm(traj, num(c, "beta"), p)}};
  bool pass = true;
  // Only p = 2 with constant density is asserted monotone.
  if (constant && p == 2.0) pass = monotone;
  if (constant && fo.N == 1) {
    const CrosscheckReport cc = convolution_crosscheck(u0, T, fo);
    res["crosscheck"] = {{"discrepancy", cc.discrepancy}, {"wrap_mass", cc.wrap_mass}, {"outer_mass", cc.outer_mass}};
    pass = pass && cc.discrepancy <= num(c, "tol");
    o.summary.push_back("convolution cross-check " + fmt(cc.discrepancy, 3) + " (wrap mass " + fmt(cc.wrap_mass, 3) +
                        ")");
  }
  o.summary.push_back(std::to_string(traj.steps) + " steps, scheme " + traj.scheme + ", energy " +
                      (monotone ? "nonincreasing" : "not monotone") + (pass ? " PASS" : " FAIL"));
  o.report["results"] = res;
  o.pass = pass;
  return o;
}

Outcome run_norm(const json& c) {
  Outcome o;
  const int N = integer(c, "N");
  if (N > 2) throw ConfigError("norm supports N = 1 or 2");
  const PeriodicGrid g{N, integer(c, "M"), num(c, "L")};
  const std::string name = text(c, "u0");
  GridField u = name == "constant" ? GridField::sample(g, constant_field(N, num(c, "value")))
                                   : GridField::sample(g, initial_field(c, N));
  const double v = weighted_lp_norm(u, num(c, "beta"), num(c, "p"));
  o.report["results"] = {{"norm", v}};
  o.pass = std::isfinite(v);
  o.summary.push_back("weighted norm " + fmt(v, 12));
  return o;
}

void validate(const std::string& cmd, const json& c) {
  if (c.contains("tol")) positive(c, "tol");
  if (num(c, "seed") < 0.0) throw ConfigError("seed must be nonnegative");
  if (c.contains("N")) dimension(c);
  if (c.contains("s")) fractional(c, "s");
  if (c.contains("beta")) positive(c, "beta");
  if (c.contains("K")) positive(c, "K");
  if (c.contains("p") && !(num(c, "p") >= 1.0)) throw ConfigError("p must be at least 1 (got " + fmt(num(c, "p")) + ")");
  if (c.contains("alpha")) num(c, "alpha");
  if (cmd == "flap") {
    positive(c, "r_max");
    positive(c, "r_step");
    power_of_two(c, "spectral_M");
    positive(c, "spectral_L");
    positive(c, "pv_tol");
  } else if (cmd == "kernel") {
    positive_list(c, "t_values");
    positive(c, "x_max");
    if (integer(c, "x_points") < 2) throw ConfigError("x_points must be at least 2");
    positive(c, "table_max");
  } else if (cmd == "certify") {
    const std::string mode = text(c, "mode");
    if (mode != "parabolic" && mode != "elliptic") throw ConfigError("mode must be 'parabolic' or 'elliptic'");
    positive(c, "T");
    positive(c, "factor");
    if (!c["lambda"].is_null()) num(c, "lambda");
    if (!c["c0"].is_null()) positive(c, "c0");
  } else if (cmd == "covering") {
    positive_list(c, "R_values");
    positive(c, "mc_samples");
  } else if (cmd == "riesz") {
    positive(c, "bump_radius");
    positive(c, "bump_height");
    positive_list(c, "R_values");
    positive(c, "sigma");
  } else if (cmd == "simulate" || cmd == "norm") {
    power_of_two(c, "M");
    positive(c, "L");
    if (cmd == "simulate") {
      positive(c, "T");
      if (!c["dt"].is_null()) positive(c, "dt");
      if (integer(c, "store_every") < 1) throw ConfigError("store_every must be at least 1");
    }
  }
}

}  // namespace

const std::vector<std::string>& commands() {
  static const std::vector<std::string> c{"flap", "kernel", "certify", "covering", "riesz", "simulate", "norm"};
  return c;
}

json defaults(const std::string& command) {
  json c = {{"seed", 12345}};
  if (command == "flap") {
    c.update({{"N", 1},
              {"s_values", {0.25, 0.5, 0.75}},
              {"r_max", 5.0},
              {"r_step", 0.25},
              {"spectral_M", 262144},
              {"spectral_L", 8192.0},
              {"pv_tol", 1e-10},
              {"tol", 1e-4}});
  } else if (command == "kernel") {
    c.update({{"N", 1},
              {"s", 0.5},
              {"t_values", {0.01, 0.1, 1.0, 10.0}},
              {"x_max", 100.0},
              {"x_points", 81},
              {"table_max", 20.0},
              {"spread_limit", 100.0},
              {"tol", 1e-6}});
  } else if (command == "certify") {
    c.update({{"N", 1},
              {"s", 0.5},
              {"alpha", 0.0},
              {"beta", 0.5},
              {"K", 1.0},
              {"p", 1.0},
              {"log_correction", false},
              {"mode", "parabolic"},
              {"T", 1.0},
              {"factor", 2.0},
              {"lambda", nullptr},
              {"c0", nullptr}});
  } else if (command == "covering") {
    c.update({{"N", 1},
              {"s", 0.5},
              {"beta", 1.0},
              {"R_values", {4.0, 8.0, 16.0, 32.0, 64.0}},
              {"mc_samples", 1000000},
              {"tol", 1e-6}});
  } else if (command == "riesz") {
    c.update({{"N", 1},
              {"s", 0.25},
              {"bump_radius", 1.0},
              {"bump_height", 1.0},
              {"table_max", 40.0},
              {"tol", 1e-3},
              {"lemma42", true},
              {"alpha", 0.0},
              {"K", 1.0},
              {"log_correction", false},
              {"beta", 0.95},
              {"sigma", 0.4},
              {"R_values", {4.0, 8.0, 16.0, 32.0}}});
  } else if (command == "simulate") {
    c.update({{"N", 1},
              {"s", 0.5},
              {"M", 512},
              {"L", 20.0},
              {"T", 0.5},
              {"dt", nullptr},
              {"store_every", 1},
              {"u0", "gaussian"},
              {"u0_width", 1.0},
              {"alpha", 0.0},
              {"K", 1.0},
              {"log_correction", false},
              {"beta", 1.0},
              {"p", 2.0},
              {"tol", 1e-3}});
  } else if (command == "norm") {
    c.update({{"N", 1},
              {"M", 4096},
              {"L", 200.0},
              {"u0", "constant"},
              {"u0_width", 1.0},
              {"value", 1.0},
              {"beta", 2.0},
              {"p", 1.0}});
  } else {
    throw ConfigError("unknown command '" + command + "'");
  }
  return c;
}

json resolve(const std::string& command, const json& file_config, const json& overrides) {
  json c = defaults(command);
  for (const json* src : {&file_config, &overrides}) {
    if (src->is_null()) continue;
    if (!src->is_object()) throw ConfigError("config must be a key-value object");
    for (const auto& [k, v] : src->items()) {
      if (!c.contains(k)) throw ConfigError("unknown config key '" + k + "' for " + command);
      c[k] = v;
    }
  }
  validate(command, c);
  return c;
}

std::pair<std::string, json> parse_override(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("override '" + text + "' is not key=value");
  const std::string key = text.substr(0, eq);
  const std::string val = text.substr(eq + 1);
  json v = json::parse(val, nullptr, false);
  if (v.is_discarded()) v = val;
  return {key, v};
}

Outcome execute(const std::string& command, const json& config) {
  Outcome o;
  if (command == "flap") o = run_flap(config);
  else if (command == "kernel") o = run_kernel(config);
  else if (command == "certify") o = run_certify(config);
  else if (command == "covering") o = run_covering(config);
  else if (command == "riesz") o = run_riesz(config);
  else if (command == "simulate") o = run_simulate(config);
  else if (command == "norm") o = run_norm(config);
  else throw ConfigError("unknown command '" + command + "'");
  o.report["command"] = command;
  o.report["config"] = config;
  o.report["pass"] = o.pass;
  return o;
}

void write_atomic(const std::filesystem::path& path, const std::string& contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot write " + tmp.string());
    f << contents;
    if (!f) throw Error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

int run(const std::string& command, const json& config, const std::filesystem::path& out, std::ostream& log) {
  const Outcome o = execute(command, config);
  std::filesystem::create_directories(out);
  for (const auto& [name, contents] : o.files) write_atomic(out / name, contents);
  write_atomic(out / "report.json", o.report.dump(2) + "\n");
  for (const auto& line : o.summary) log << line << '\n';
  log << command << ": " << (o.pass ? "PASS" : "FAIL") << '\n';
  return o.pass ? 0 : 1;
}

}  // namespace fraccert::app
