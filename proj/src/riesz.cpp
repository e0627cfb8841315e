#include "fraccert/riesz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <sstream>

#include "fraccert/errors.hpp"
#include "fraccert/fraclap.hpp"
#include "fraccert/quadrature.hpp"
#include "fraccert/specfun.hpp"

namespace fraccert {

namespace {

constexpr int kMultipoleTerms = 30;

// Unit-constant potential |.|^{2s-1} * F on the line.
struct Convolution {
  ScalarField F;
  double s = 0.25;
  double a = 1.0;
  double tol = 1e-10;
  std::vector<double> coef;  // binom(2s-1, k) (-1)^k m_k

  double operator()(double x) const {
    if (std::abs(x) >= 3.0 * a) return far(x);
    return near(x);
  }

  double far(double x) const {
    const double ax = std::abs(x);
    double sum = 0.0;
    double xk = 1.0;
    for (double c : coef) {
      sum += c * xk;
      xk /= x;
    }
    return std::pow(ax, 2.0 * s - 1.0) * sum;
  }

  // int F(y) |x - y|^{2s-1} dy with |y - x| = v^{1/(2s)} on each side of x.
  double near(double x) const {
    const double p = 1.0 / (2.0 * s);
    double total = 0.0;
    for (double side : {1.0, -1.0}) {
      const double edge = side > 0.0 ? a - x : x + a;  // distance to the far end of the support
      if (edge <= 0.0) continue;
      const double inner = std::max(0.0, side > 0.0 ? -a - x : x - a);
      auto g = [&](double v) { return F(Point{x + side * std::pow(v, p)}); };
      quad::Result r = quad::adaptive(g, std::pow(inner, 2.0 * s), std::pow(edge, 2.0 * s), {1e-300, tol});
      total += p * r.value;
    }
    return total;
  }
};

ScalarField make_phi(std::shared_ptr<const Convolution> conv, double k, bool radial, double amplitude, double sup) {
  const double s = conv->s;
  if (radial) {
    return ScalarField::from_radial(
        1, [conv, k](double r) { return k * (*conv)(r); }, DecayClass::POWER, 1.0 - 2.0 * s, amplitude, 0.0, sup,
        "riesz_potential");
  }
  return ScalarField::from_point(
      1, [conv, k](const Point& x) { return k * (*conv)(x[0]); }, DecayClass::POWER, 1.0 - 2.0 * s, amplitude, 0.0,
      sup, "riesz_potential");
}

double sup_relative(const std::vector<double>& flap, const std::vector<double>& F, double k) {
  double num = 0.0;
  double den = 0.0;
  for (size_t i = 0; i < F.size(); ++i) {
    num = std::max(num, std::abs(k * flap[i] - F[i]));
    den = std::max(den, std::abs(F[i]));
  }
  return num / den;
}

}  // namespace

double riesz_constant(const FracOrder& fo) {
  fo.validate();
  const double s = fo.s;
  return gamma_fn(0.5 * fo.N - s) / (std::pow(4.0, s) * std::pow(M_PI, 0.5 * fo.N) * gamma_fn(s));
}

RieszResult riesz_potential(const ScalarField& F, const FracOrder& fo, RieszOptions opt) {
  fo.validate();
  if (!(fo.N > 2.0 * fo.s)) throw DimensionError("Riesz potential needs N > 2s");
  if (fo.N != 1) throw DimensionError("Riesz potential is implemented for N = 1 only");
  if (F.dim != 1) throw ParameterError("field dimension differs from N");
  if (F.decay != DecayClass::COMPACT || !(F.support > 0.0))
    throw ParameterError("Riesz potential needs a compactly supported source");

  auto conv = std::make_shared<Convolution>();
  conv->F = F;
  conv->s = fo.s;
  conv->a = F.support;
  conv->tol = opt.tol;
  const double a = F.support;

  double fmax = 0.0;
  for (int i = 0; i <= 400; ++i) {
    const double v = F(Point{-a + 2.0 * a * i / 400.0});
    if (v < 0.0) throw ParameterError("Riesz potential needs a nonnegative source");
    fmax = std::max(fmax, v);
  }
  if (fmax == 0.0) throw ParameterError("source vanishes identically");

  // Moments for the far-field expansion.
  const double s2 = 2.0 * fo.s;
  double c = 1.0;
  std::vector<double> moments;
  for (int k = 0; k < kMultipoleTerms; ++k) {
    auto f = [&](double y) { return F(Point{y}) * std::pow(y, k); };
    quad::Result m = quad::adaptive_pieces(f, {-a, 0.0, a}, {1e-300, 1e-13});
    moments.push_back(m.value);
    conv->coef.push_back(c * m.value);
    c *= -(s2 - 1.0 - k) / (k + 1.0);
  }

  RieszResult out;
  out.fo = fo;
  out.support = a;
  out.mass = moments[0];
  out.k_classical = riesz_constant(fo);

  // |phi~| (1+|x|)^{1-2s} <= max(m0 2^{1-2s}, fmax 2 a^{2s}/(2s) (2+2a)^{1-2s})
  const double bound = std::max(out.mass * std::pow(2.0, 1.0 - s2),
                                fmax * 2.0 * std::pow(a, s2) / s2 * std::pow(2.0 + 2.0 * a, 1.0 - s2));
  const double sup_bound = fmax * 2.0 * std::pow(a, s2) / s2;
  const bool radial = F.is_radial();

  // Calibrate k against (-Delta)^s phi~ = F / k.
  const ScalarField unit = make_phi(conv, 1.0, radial, bound, sup_bound);
  std::vector<double> Fv;
  std::vector<double> g;
  const int n = std::max(opt.calibration_points, 5);
  for (int i = 0; i < n; ++i) {
    const double x = -3.0 * a + 6.0 * a * i / (n - 1);
    out.nodes.push_back(x);
    Fv.push_back(F(Point{x}));
    g.push_back(flap_pv(unit, Point{x}, fo, opt.pv_tol).value);
  }
  double num = 0.0;
  double den = 0.0;
  for (size_t i = 0; i < g.size(); ++i) {
    num += g[i] * Fv[i];
    den += g[i] * g[i];
  }
  if (!(den > 0.0)) throw CalibrationError("Riesz calibration: degenerate pv values");
  out.k = num / den;
  out.residual = sup_relative(g, Fv, out.k);
  out.residual_classical = sup_relative(g, Fv, out.k_classical);
  for (double v : g) out.flap.push_back(out.k * v);

  out.phi = make_phi(conv, out.k, radial, out.k * bound, out.k * sup_bound);

  for (double r : {20.0, 40.0}) {
    const double v = out.phi(Point{r}) * std::pow(r, 1.0 - s2) / (out.k * out.mass);
    out.far_field.emplace_back(r, v);
  }

  // Two-sided comparability of phi + |phi'| with (1 + |x|^{N-2s})^{-1}.
  std::vector<double> xs{0.0};
  for (int i = 0; i <= 200; ++i) xs.push_back(std::pow(10.0, -3.0 + 7.0 * i / 200.0));
  if (!radial) {
    const size_t m = xs.size();
    for (size_t i = 1; i < m; ++i) xs.push_back(-xs[i]);
  }
  out.C0 = std::numeric_limits<double>::infinity();
  out.C1 = 0.0;
  out.positive = true;
  for (double x : xs) {
    const double h = 1e-4 * (1.0 + std::abs(x));
    const double v = out.phi(Point{x});
    const double d = (out.phi(Point{x + h}) - out.phi(Point{x - h})) / (2.0 * h);
    if (!(v > 0.0)) out.positive = false;
    const double w = (v + std::abs(d)) * (1.0 + std::pow(std::abs(x), 1.0 - s2));
    out.C0 = std::min(out.C0, w);
    out.C1 = std::max(out.C1, w);
  }
  return out;
}

Lemma42Report lemma42_check(const RieszResult& riesz, const DensityModel& density, double beta,
                            const std::vector<double>& Rs, double sigma) {
  const FracOrder& fo = riesz.fo;
  density.validate();
  const double s = fo.s;
  const double N = fo.N;
  const double alpha = density.alpha;
  Lemma42Report rep;
  rep.sigma = sigma;
  rep.window_beta = beta - N + 2.0 * s - 2.0 * alpha;
  rep.window_s = 2.0 * s - 2.0 * alpha;
  rep.hypothesis_line = alpha < s && N > -2.0 * s + alpha;
  rep.body_condition = N - 2.0 * s + 2.0 * alpha > 0.0;
  if (rep.hypothesis_line != rep.body_condition)
    rep.notes.push_back("hypothesis conditions (alpha < s, N > -2s + alpha) disagree with N - 2s + 2 alpha > 0");
  if (!rep.body_condition) throw ParameterError("lemma42_check needs N - 2s + 2 alpha > 0");
  const double top = std::min(rep.window_beta, rep.window_s);
  if (!(top > 0.0)) throw ParameterError("no admissible sigma: the window is empty");
  if (!(sigma > 0.0 && sigma < top)) {
    std::ostringstream os;
    os << "sigma = " << sigma << " outside the admissible window (0, " << top << ")";
    throw ParameterError(os.str());
  }
  if (Rs.size() < 2) throw ParameterError("lemma42_check needs at least two scales");

  const bool radial = riesz.phi.is_radial();
  for (double R : Rs) {
    if (!(R > 0.0)) throw ParameterError("scales must be positive");
    const CutoffFamily gamma{R};
    const ScalarField g = cutoff_field(gamma, 1);
    std::vector<double> xs{0.0};
    for (int i = 0; i <= 30; ++i) xs.push_back(0.05 * std::pow(1000.0 * R, i / 30.0));
    if (!radial) {
      const size_t m = xs.size();
      for (size_t i = 1; i < m; ++i) xs.push_back(-xs[i]);
    }
    const double scale = std::pow(R, sigma);
    double sup = 0.0;
    double far = 0.0;
    for (double x : xs) {
      const Point p{x};
      const double phi = riesz.phi(p);
      const double fg = cutoff_flap(gamma, p, fo, 1e-9).value;
      const double b = bilinear_form(riesz.phi, g, p, fo, 1e-9).value;
      const double rho = density(p, s);
      sup = std::max(sup, scale * (std::abs(phi * fg) + std::abs(b)) / (rho * phi));
      far = std::max(far, scale * std::abs(fg) * (1.0 + std::pow(std::abs(x), 2.0 * s - sigma)));
    }
    rep.Rs.push_back(R);
    rep.sups.push_back(sup);
    rep.far_field.push_back(far);
  }
  const auto [lo, hi] = std::minmax_element(rep.sups.begin(), rep.sups.end());
  rep.spread = *lo > 0.0 ? *hi / *lo : std::numeric_limits<double>::infinity();
  rep.pass = rep.spread <= 5.0;
  return rep;
}

}  // namespace fraccert
