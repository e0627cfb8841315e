// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "fraccert/certify.hpp"
#include "fraccert/covering.hpp"
#include "fraccert/fraclap.hpp"
#include "fraccert/grid.hpp"
#include "fraccert/heatkernel.hpp"
#include "fraccert/riesz.hpp"
#include "fraccert/solver.hpp"
#include "fraccert/specfun.hpp"

using namespace fraccert;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& name, const std::function<Verdict()>& body, double limit_s = 0.0) {
  const auto t0 = std::chrono::steady_clock::now();
  Verdict v;
  try {
    v = body();
  } catch (const std::exception& e) {
    v.pass = false;
    v.detail = std::string("exception: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (limit_s > 0.0 && secs > limit_s) {
    v.pass = false;
    v.detail += " [runtime limit " + std::to_string(limit_s) + " s exceeded]";
  }
  if (!v.pass) ++failures;
  std::printf("%s criterion %2d %-28s %s (%.1f s)\n", v.pass ? "PASS" : "FAIL", id, name.c_str(), v.detail.c_str(),
              secs);
  std::fflush(stdout);
}

std::string sci(double v) {
  char b[32];
  std::snprintf(b, sizeof b, "%.3g", v);
  return b;
}

double sup_diff(const GridField& a, const GridField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) m = std::max(m, std::abs(a.values[i] - b.values[i]));
  return m;
}

// ---------------------------------------------------------------------------

Verdict oracle_triangle() {
  const ScalarField u = gaussian_field(1);
  const PeriodicGrid g{1, 262144, 8192.0};
  const GridField ug = GridField::sample(g, u);
  double worst = 0.0;
  for (double s : {0.25, 0.5, 0.75}) {
    const FracOrder fo{s, 1};
    const GridField sp = flap_spectral(ug, fo);
    for (int i = -20; i <= 20; ++i) {
      const double x = 0.25 * i;
      const double cf = gaussian_flap_closed_form(fo, std::abs(x));
      const double pv = flap_pv(u, Point{x}, fo, 1e-10).value;
      const double spv = sp.values[static_cast<std::size_t>(std::llround((x + g.L) / g.h()))];
      worst = std::max(worst, std::max({std::abs(cf - pv), std::abs(cf - spv), std::abs(pv - spv)}) / std::abs(cf));
    }
  }
  // Weight psi = (1+x^2)^{-beta/2}: quadrature against the hypergeometric form with its classical constant.
  double worst_psi = 0.0;
  for (double s : {0.25, 0.5, 0.75}) {
    const FracOrder fo{s, 1};
    const double beta = 1.0;
    const RadialClosedForm cf(beta, fo);
    const ScalarField psi = weight_field(1, beta);
    for (int i = 0; i <= 10; ++i) {
      const double x = 0.5 * i;
      const double closed = cf.classical_constant() * cf.shape(x);
      const double pv = flap_pv(psi, Point{x}, fo, 1e-11).value;
      worst_psi = std::max(worst_psi, std::abs(closed - pv) / std::abs(closed));
    }
  }
  return {worst <= 1e-4 && worst_psi <= 1e-4,
          "gaussian max rel " + sci(worst) + ", psi max rel " + sci(worst_psi) + " (limit 1e-4)"};
}

Verdict poisson_kernel() {
  const KernelProfile kp({0.5, 1});
  double worst = 0.0;
  for (double t : {0.1, 1.0, 10.0}) {
    for (int i = 0; i <= 400; ++i) {
      const double x = -20.0 + 0.1 * i;
      const double exact = t / (M_PI * (t * t + x * x));
      worst = std::max(worst, std::abs(kernel_eval(kp, Point{x}, t) - exact) / exact);
    }
  }
  double mass_err = std::abs(kp.mass() - 1.0);
  for (double t : {0.1, 1.0, 10.0}) mass_err = std::max(mass_err, std::abs(kp.tail_mass(0.0, t) - 1.0));
  return {worst <= 1e-6 && mass_err <= 1e-6, "max rel err " + sci(worst) + ", mass err " + sci(mass_err)};
}

Verdict two_sided_bound() {
  std::vector<double> xs{0.0};
  for (int i = 0; i <= 60; ++i) xs.push_back(std::pow(10.0, -3.0 + 5.0 * i / 60.0));
  std::vector<double> ts;
  for (int i = 0; i <= 12; ++i) ts.push_back(0.01 * std::pow(1000.0, i / 12.0));
  double worst = 0.0;
  bool ok = true;
  for (double s : {0.25, 0.5, 0.75}) {
    const BoundReport b = bound_check(KernelProfile({s, 1}), xs, ts);
    ok = ok && b.pass && b.min_ratio > 0.0 && std::isfinite(b.max_ratio);
    worst = std::max(worst, b.spread);
  }
  return {ok && worst <= 100.0, "worst spread " + sci(worst) + " (limit 100)"};
}

Verdict cutoff_scaling() {
  double worst = 0.0;
  double spread = 0.0;
  for (double s : {0.25, 0.5, 0.75}) {
    const FracOrder fo{s, 1};
    double cmin = 1e300;
    double cmax = 0.0;
    std::vector<double> base;
    std::vector<double> ys;
    for (int i = 0; i <= 24; ++i) ys.push_back(0.1 * i);
    for (double y : ys) base.push_back(cutoff_flap({1.0}, Point{y}, fo, 1e-13).value);
    double sup1 = 0.0;
    for (double b : base) sup1 = std::max(sup1, std::abs(b));
    for (double R : {2.0, 8.0, 32.0}) {
      const double scale = std::pow(R, -2.0 * fo.s);
      double sup = 0.0;
      for (size_t i = 0; i < ys.size(); ++i) {
        const double v = cutoff_flap({R}, Point{ys[i] * R}, fo, 1e-13).value;
        worst = std::max(worst, std::abs(v - scale * base[i]) / (scale * sup1));
        sup = std::max(sup, std::abs(v));
      }
      const double C = sup / scale;
      cmin = std::min(cmin, C);
      cmax = std::max(cmax, C);
    }
    spread = std::max(spread, cmax / cmin - 1.0);
  }
  const bool one_C = spread <= 1e-6;
  return {worst <= 1e-8 && one_C,
          "max scaled deviation " + sci(worst) + ", sup constants per s agree to " + sci(spread)};
}

Verdict case_one_sign() {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  int done = 0;
  int bad = 0;
  std::string cases;
  while (done < 10) {
    const int N = 1 + static_cast<int>(3.0 * U(rng));
    const double s = 0.05 + 0.9 * U(rng);
    const double top = N - 2.0 * s;
    if (top < 0.05) continue;
    const double beta = 0.02 + (top - 0.02) * U(rng);
    const FracOrder fo{s, N};
    ProblemSpec spec;
    spec.fo = fo;
    spec.beta = beta;
    spec.T = 1.0;
    const SupersolutionCriterion ode = radial_supersolution_criterion(beta, fo);
    for (size_t i = 0; i < 40; ++i) {
      const double r = ode.radii[i];
      const double v = neg_flap_psi(spec, r);
      const double lhs = ode.lhs[i];
      const bool closed_ok = v <= 0.0;
      const bool ode_ok = lhs <= 0.0;
      if (!closed_ok || ode_ok != closed_ok || !ode.holds) ++bad;
    }
    ++done;
  }
  return {bad == 0, "10 triples x 40 radii, violations " + std::to_string(bad)};
}

Verdict hypergeometric_limits() {
  const double w = 1e-8;
  // Leading-order limit, one representative per regime.
  struct Rep {
    double a, b, c;
  };
  const Rep reps[] = {{0.5, 0.5, 2.0}, {1.0, 1.0, 2.0}, {-0.75, 2.25, 1.0}};
  double worst_limit = 0.0;
  for (const auto& r : reps) {
    const LimitClass lc = limit_classify(r.a, r.b, r.c);
    const double F = hyp2f1_complement(r.a, r.b, r.c, w) / regime_normalizer(lc, w);
    worst_limit = std::max(worst_limit, std::abs(F - lc.constant) / std::abs(lc.constant));
  }
  // Theorem parameters (a, b, c) = (-s, beta/2 + s, N/2): the constants, and F against its
  // two-term expansion at 1 - z = w (the leading term alone converges like w^{c-a-b} or 1/log).
  struct Case {
    int N;
    double s, beta;
    CaseLabel label;
  };
  const Case cases[] = {{1, 0.5, 0.5, CaseLabel::II}, {3, 0.25, 2.7, CaseLabel::II}, {1, 0.5, 1.0, CaseLabel::III},
                        {2, 0.75, 2.0, CaseLabel::III}, {1, 0.5, 2.0, CaseLabel::IV}, {2, 0.75, 3.0, CaseLabel::IV}};
  double worst_const = 0.0;
  double worst_two_term = 0.0;
  for (const auto& c : cases) {
    ProblemSpec spec;
    spec.fo = {c.s, c.N};
    spec.beta = c.beta;
    spec.T = 1.0;
    const RegimeConstant rc = regime_constant(spec);
    if (rc.label != c.label) return {false, "unexpected case label"};
    worst_const = std::max(worst_const, rc.rel_diff);
    const double a = -c.s;
    const double b = 0.5 * c.beta + c.s;
    const double cc = 0.5 * c.N;
    const double g = cc - a - b;
    const double F = hyp2f1_complement(a, b, cc, w);
    double two_term;
    if (std::abs(g) < 1e-12) {
      two_term = gamma_fn(a + b) * rgamma(a) * rgamma(b) *
                 (-std::log(w) + 2.0 * digamma_fn(1.0) - digamma_fn(a) - digamma_fn(b));
    } else {
      const double A = gamma_fn(cc) * gamma_fn(g) * rgamma(cc - a) * rgamma(cc - b);
      const double B = gamma_fn(cc) * gamma_fn(-g) * rgamma(a) * rgamma(b);
      two_term = A + B * std::pow(w, g);
    }
    worst_two_term = std::max(worst_two_term, std::abs(F - two_term) / std::abs(F));
  }
  return {worst_limit <= 1e-3 && worst_const <= 1e-10 && worst_two_term <= 1e-3,
          "regime limits rel " + sci(worst_limit) + ", constants rel " + sci(worst_const) +
              ", case triples two-term rel " + sci(worst_two_term)};
}

Verdict certificate() {
  ProblemSpec spec;
  spec.fo = {0.5, 1};
  spec.beta = 0.5;
  spec.p = 1.0;
  spec.T = 1.0;
  if (classify(spec) != CaseLabel::II) return {false, "classification is not II"};
  const Thresholds th = default_thresholds(spec);
  const CertificateReport par = verify_parabolic(spec, 2.0 * th.lambda_min);
  bool residuals_ok = true;
  for (const auto& n : par.nodes)
    if (!(n.residual < 0.0) || n.residual > -1e-8 * n.scale) residuals_ok = false;
  ProblemSpec ell = spec;
  ell.T.reset();
  ell.c0 = 2.0 * th.elliptic_min / (ell.p * ell.density.K);
  const CertificateReport el = verify_elliptic(ell);
  return {par.pass && residuals_ok && el.pass,
          "case II, lambda_min " + sci(th.lambda_min) + ", parabolic " + (par.pass ? "pass" : "fail") +
              ", elliptic " + (el.pass ? "pass" : "fail")};
}

Verdict covering_decay() {
  const double beta = 1.0;
  const ScalarField u = ScalarField::from_radial(
      1, [beta](double r) { return std::pow(1.0 + r * r, -0.5 * (beta + 1.0)); }, DecayClass::POWER, beta + 1.0,
      std::pow(2.0, 0.5 * (beta + 1.0)), 0.0, 1.0, "u");
  const ScalarField psi = weight_field(1, beta);
  const std::vector<double> Rs{4, 8, 16, 32, 64};
  bool ok = true;
  std::string d;
  for (double s : {0.5, 0.75, 0.9}) {
    const CoveringScan sc = covering_scan(u, psi, Rs, {s, 1}, beta);
    bool rates = true;
    for (int k : {1, 2, 3}) rates = rates && std::abs(sc.shell_fits[k].exponent + 2.0 * s) <= 0.3;
    if (s >= 0.5) rates = rates && sc.shell_fits[4].exponent <= 1.0 - 2.0 * s + 0.3;
    const bool vanish = s < 0.9 || sc.final_over_initial <= 1e-2;
    ok = ok && rates && sc.monotone && vanish;
    d += "s=" + sci(s) + ": A2 " + sci(sc.shell_fits[1].exponent) + " A3 " + sci(sc.shell_fits[2].exponent) + " A4 " +
         sci(sc.shell_fits[3].exponent) + " A5 " + sci(sc.shell_fits[4].exponent) + " ratio " +
         sci(sc.final_over_initial) + (sc.monotone ? " mono" : " NOT mono") + "; ";
  }
  return {ok, d};
}

RieszResult& riesz_case() {
  static RieszResult r = riesz_potential(bump_field(1, 1.0), {0.25, 1});
  return r;
}

Verdict riesz_inversion() {
  const RieszResult& r = riesz_case();
  bool far = true;
  for (const auto& [x, v] : r.far_field) far = far && std::abs(v - 1.0) <= 0.05;
  const bool ok = r.residual <= 1e-3 && r.C0 > 0.0 && r.C0 < r.C1 && std::isfinite(r.C1) && r.positive && far;
  return {ok, "residual " + sci(r.residual) + ", k " + sci(r.k) + " (classical " + sci(r.k_classical) + "), C0 " +
                  sci(r.C0) + ", C1 " + sci(r.C1)};
}

Verdict lemma42() {
  DensityModel d;
  const Lemma42Report L = lemma42_check(riesz_case(), d, 0.95, {4, 8, 16, 32}, 0.4);
  std::string s = "spread " + sci(L.spread) + " sups";
  for (double v : L.sups) s += " " + sci(v);
  return {L.pass, s};
}

Verdict solver() {
  std::string d;
  bool ok = true;
  DensityModel unit;
  // zero data
  {
    const PeriodicGrid g{1, 256, 20.0};
    const Trajectory tr = evolve(GridField::zeros(g), unit, {0.5, 1}, 1.0, 0.1);
    bool zero = true;
    for (const auto& st : tr.states)
      for (double v : st.u.values) zero = zero && v == 0.0;
    ok = ok && zero;
    d += zero ? "zero exact; " : "zero FAILED; ";
  }
  // single mode
  {
    const PeriodicGrid g{1, 128, M_PI};
    const double k = 5.0;
    const GridField u0 = GridField::sample(g, [k](const Point& x) { return std::cos(k * x[0]); });
    const Trajectory tr = evolve(u0, unit, {0.3, 1}, 0.9, 0.1);
    const double decay = std::exp(-std::pow(k, 0.6) * 0.9);
    const GridField ex = GridField::sample(g, [&](const Point& x) { return decay * std::cos(k * x[0]); });
    const double e = sup_diff(tr.states.back().u, ex);
    ok = ok && e <= 1e-12;
    d += "mode err " + sci(e) + "; ";
  }
  // convolution cross-check and semigroup
  {
    const PeriodicGrid g{1, 512, 20.0};
    const GridField u0 = GridField::sample(g, gaussian_field(1));
    const CrosscheckReport cc = convolution_crosscheck(u0, 0.5, {0.5, 1});
    const GridField a = evolve(u0, unit, {0.5, 1}, 0.5, 0.5).states.back().u;
    const GridField b = evolve(u0, unit, {0.5, 1}, 0.5, 0.25).states.back().u;
    const double semi = sup_diff(a, b) / a.max_abs();
    ok = ok && cc.discrepancy <= 1e-3 && semi <= 1e-4;
    d += "crosscheck " + sci(cc.discrepancy) + ", semigroup " + sci(semi) + "; ";
  }
  // energy
  {
    const PeriodicGrid g{1, 256, 20.0};
    const GridField u0 = GridField::sample(g, bump_field(1, 2.0));
    const Trajectory tr = evolve(u0, unit, {0.5, 1}, 1.0, 0.02);
    const auto E = energy_monitor(tr, unit, [](const Point&, double) { return 1.0; }, 2.0);
    bool mono = true;
    for (size_t k = 1; k < E.size(); ++k) mono = mono && E[k] <= E[k - 1] + 1e-12 * E[0];
    ok = ok && mono;
    d += mono ? "energy nonincreasing; " : "energy NOT monotone; ";
  }
  // self-convergence with rho = (1+x^2)^{-1/2}
  {
    DensityModel rho;
    rho.alpha = 0.5;
    rho.rho = [](const Point& x) { return 1.0 / std::sqrt(1.0 + x[0] * x[0]); };
    const PeriodicGrid g{1, 256, 20.0};
    const GridField u0 = GridField::sample(g, bump_field(1, 1.0));
    const FracOrder fo{0.5, 1};
    const double dt = 0.5 / std::ceil(0.5 / stable_step(u0, rho, fo));
    const GridField a = evolve(u0, rho, fo, 0.5, dt).states.back().u;
    const GridField b = evolve(u0, rho, fo, 0.5, dt / 2).states.back().u;
    const GridField c = evolve(u0, rho, fo, 0.5, dt / 4).states.back().u;
    const double factor = sup_diff(a, c) / sup_diff(b, c);
    ok = ok && factor >= 1.8;
    d += "self-convergence factor " + sci(factor);
  }
  return {ok, d};
}

Verdict convexity() {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> U(-3.0, 3.0);
  std::vector<Point> pts;
  for (int i = 0; i < 10; ++i) pts.push_back({U(rng)});
  double worst = -1e300;
  bool ok = true;
  for (double s : {0.25, 0.5, 0.75}) {
    for (auto [p, a] : {std::pair{1.0, 1.0}, std::pair{2.0, 0.01}}) {
      const ConvexityReport r = convexity_check(gaussian_field(1), p, a, pts, {s, 1}, 1e-4);
      ok = ok && r.pass;
      worst = std::max(worst, r.max_violation);
    }
  }
  return {ok && worst <= 1e-4, "max(lhs - rhs) " + sci(worst) + " (limit 1e-4)"};
}

}  // namespace

int main() {
  report(1, "oracle triangle", oracle_triangle, 60.0);
  report(2, "Poisson kernel", poisson_kernel, 10.0);
  report(3, "two-sided kernel bound", two_sided_bound);
  report(4, "cutoff scaling", cutoff_scaling);
  report(5, "case (i) supersolution sign", case_one_sign);
  report(6, "hypergeometric limits", hypergeometric_limits);
  report(7, "certificate end-to-end", certificate, 120.0);
  report(8, "remainder vanishing", covering_decay);
  report(9, "Riesz inversion", riesz_inversion);
  report(10, "scaled sup ratio", lemma42);
  report(11, "solver", solver);
  report(12, "convexity inequality", convexity);
  std::printf("%d of 12 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
