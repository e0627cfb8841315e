#include "fraccert/fraclap.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <tuple>
#include <boost/math/special_functions/hypergeometric_1F1.hpp>

#include "fraccert/errors.hpp"
#include "fraccert/quadrature.hpp"
#include "fraccert/specfun.hpp"

namespace fraccert {

namespace {

// Integral of an increment function over x + rho S^{N-1}.  `hr` takes the
// distance |y| (radial fields), `hp` takes the point y.
template <class HR, class HP>
double sphere_integral(int N, const Point& x, double r, bool radial, double rho, HR&& hr, HP&& hp, double abs_tol,
                       double rel_tol) {
  if (N == 1) {
    if (radial) return hr(std::abs(r + rho)) + hr(std::abs(r - rho));
    return hp(Point{x[0] + rho}) + hp(Point{x[0] - rho});
  }
  if (radial) {
    if (r == 0.0) return sphere_area(N) * hr(rho);
    const double w = sphere_area(N - 1);
    const double diff2 = (r - rho) * (r - rho);
    auto integrand = [&](double th) {
      const double c = std::cos(0.5 * th);
      const double d = std::sqrt(diff2 + 4.0 * r * rho * c * c);
      const double v = hr(d);
      if (N == 2) return v;
      const double sn = std::sin(th);
      return N == 3 ? v * sn : v * std::pow(sn, N - 2);
    };
    quad::Result q = quad::adaptive(integrand, 0.0, M_PI, {abs_tol / w, rel_tol}, 400);
    return w * q.value;
  }
  if (N == 2) {
    double prev = 0.0;
    for (int n = 32; n <= 8192; n *= 2) {
      double sum = 0.0;
      for (int k = 0; k < n; ++k) {
        const double th = 2.0 * M_PI * k / n;
        sum += hp(Point{x[0] + rho * std::cos(th), x[1] + rho * std::sin(th)});
      }
      sum *= 2.0 * M_PI / n;
      if (n > 32 && std::abs(sum - prev) <= std::max(abs_tol, rel_tol * std::abs(sum))) return sum;
      prev = sum;
    }
    return prev;
  }
  if (N == 3) {
    auto ring = [&](double mu) {
      const double st = std::sqrt(std::max(0.0, 1.0 - mu * mu));
      double prev = 0.0;
      for (int n = 16; n <= 4096; n *= 2) {
        double sum = 0.0;
        for (int k = 0; k < n; ++k) {
          const double ph = 2.0 * M_PI * k / n;
          sum += hp(Point{x[0] + rho * st * std::cos(ph), x[1] + rho * st * std::sin(ph), x[2] + rho * mu});
        }
        sum *= 2.0 * M_PI / n;
        if (n > 16 && std::abs(sum - prev) <= std::max(0.1 * abs_tol, rel_tol * std::abs(sum))) return sum;
        prev = sum;
      }
      return prev;
    };
    return quad::adaptive(ring, -1.0, 1.0, {abs_tol, rel_tol}, 400).value;
  }
  throw ParameterError("angular quadrature for non-radial fields supports N <= 3");
}

// Bound on |u(y)| for |y - x| = rho, where |x| = r.
double field_bound(const ScalarField& u, double r, double rho) {
  switch (u.decay) {
    case DecayClass::COMPACT: return rho >= r + u.support ? 0.0 : u.sup;
    case DecayClass::POWER:
      if (rho <= r) return u.sup;
      return std::min(u.sup, u.amplitude * std::pow(1.0 + rho - r, -u.exponent));
    case DecayClass::BOUNDED: return u.amplitude;
  }
  return u.sup;
}

bool decays(const ScalarField& u) {
  return u.decay == DecayClass::COMPACT || (u.decay == DecayClass::POWER && u.exponent > 0.0);
}

struct Shell {
  double s = 0.5;
  double delta = 0.0;
  double eta = 0.0;
  double T = 50.0;
  bool quartic = true;
  std::function<double(double)> Q;
  double q_inf = 0.0;                       // limit of Q added analytically beyond the last radius
  std::function<double(double)> tail_sup;   // sup of |Q - q_inf| beyond rho
  std::vector<double> cuts;
};

// int_0^inf rho^{-1-2s} Q(rho) drho.
ValueError shell_integral(const Shell& sh, double tol) {
  const double s2 = 2.0 * sh.s;
  ValueError out;

  // Inner ball: Q(rho) = c2 rho^2 + c4 rho^4 + ...
  const double qe = sh.Q(sh.eta);
  const double qh = sh.Q(0.5 * sh.eta);
  double c2, c4 = 0.0;
  if (sh.quartic) {
    c4 = (qe - 4.0 * qh) / (0.75 * std::pow(sh.eta, 4));
    c2 = (qe - c4 * std::pow(sh.eta, 4)) / (sh.eta * sh.eta);
  } else {
    c2 = qh / (0.25 * sh.eta * sh.eta);
  }
  const double inner2 = c2 * std::pow(sh.eta, 2.0 - s2) / (2.0 - s2);
  const double inner4 = c4 * std::pow(sh.eta, 4.0 - s2) / (4.0 - s2);
  out.value = inner2 + inner4;
  if (sh.quartic) {
    out.error += 0.1 * std::abs(inner4) + 1e-14 * std::abs(inner2);
  } else {
    const double c2e = qe / (sh.eta * sh.eta);
    out.error += std::abs(c2e - c2) * std::pow(sh.eta, 2.0 - s2) / (2.0 - s2);
  }

  // Middle region [eta, T].
  std::vector<double> cuts{sh.eta, sh.delta};
  for (double c = 2.0 * sh.delta; c < sh.T; c *= 2.0) cuts.push_back(c);
  cuts.push_back(sh.T);
  for (double c : sh.cuts)
    if (c > sh.eta && c < sh.T) cuts.push_back(c);
  auto mid = [&](double rho) { return std::pow(rho, -1.0 - s2) * sh.Q(rho); };
  quad::Result m = quad::adaptive_pieces(mid, cuts, {0.5 * tol, 1e-13});
  out.value += m.value;
  out.error += m.error;

  // Tail [T, inf) in the variable rho = T e^v.
  double rho_v = sh.T;
  auto remainder = [&](double rv) { return sh.tail_sup(rv) * std::pow(rv, -s2) / s2; };
  int doublings = 0;
  while (remainder(rho_v) > 0.05 * tol) {
    rho_v *= 2.0;
    if (++doublings > 900) {
      std::ostringstream os;
      os << "tail bound " << remainder(rho_v) << " exceeds tolerance " << tol;
      throw TailTruncationError(os.str());
    }
  }
  if (rho_v > sh.T) {
    const double V = std::log(rho_v / sh.T);
    const double Ts = std::pow(sh.T, -s2);
    auto tail = [&](double v) { return Ts * std::exp(-s2 * v) * sh.Q(sh.T * std::exp(v)); };
    std::vector<double> vc;
    for (double v = 0.0; v < V; v += 1.0) vc.push_back(v);
    vc.push_back(V);
    quad::Result t = quad::adaptive_pieces(tail, vc, {0.3 * tol, 1e-13});
    out.value += t.value;
    out.error += t.error;
  }
  out.value += sh.q_inf * std::pow(rho_v, -s2) / s2;
  out.error += remainder(rho_v);
  if (!std::isfinite(out.value)) throw ConvergenceError("singular integral produced a non-finite value");
  return out;
}

std::vector<double> graded_cuts(double center, double lo_limit) {
  std::vector<double> c;
  if (center <= lo_limit) return c;
  c.push_back(center);
  for (int k = 1; k <= 12; ++k) {
    const double f = std::ldexp(1.0, -k);
    c.push_back(center * (1.0 - f));
    c.push_back(center * (1.0 + f));
  }
  return c;
}

void check_point(const ScalarField& u, const Point& x, const FracOrder& fo) {
  fo.validate();
  if (u.dim != fo.N || static_cast<int>(x.size()) != fo.N) throw ParameterError("field, point and order dimensions differ");
}

}  // namespace

double normalization_constant(const FracOrder& fo) {
  fo.validate();
  const double s = fo.s;
  return std::pow(2.0, 2.0 * s - 1.0) * 2.0 * s * gamma_fn(0.5 * (fo.N + 2.0 * s)) /
         (std::pow(M_PI, 0.5 * fo.N) * gamma_fn(1.0 - s));
}

double gaussian_flap_closed_form(const FracOrder& fo, double r) {
  fo.validate();
  const double a = 0.5 * fo.N + fo.s;
  const double b = 0.5 * fo.N;
  return std::pow(4.0, fo.s) * gamma_fn(a) / gamma_fn(b) * boost::math::hypergeometric_1F1(a, b, -r * r);
}

ValueError normalization_constant_integral(const FracOrder& fo, double tol) {
  fo.validate();
  const int N = fo.N;
  const double s2 = 2.0 * fo.s;
  const double area = sphere_area(N);
  // After integrating over angles: int_0^inf rho^{-1-2s} (|S| - sphere_fourier(N, rho)) drho.
  auto small = [&](double rho) {
    // |S| - sphere_fourier without cancellation for rho <= 4.
    const double q = -0.25 * rho * rho;
    double term = 1.0 / std::tgamma(0.5 * N);
    double sum = 0.0;
    for (int k = 1; k < 80; ++k) {
      term *= q / (k * (k - 1.0 + 0.5 * N));
      sum += term;
      if (std::abs(term) < 1e-18 * std::abs(sum)) break;
    }
    return -area * std::tgamma(0.5 * N) * sum * std::pow(rho, -1.0 - s2);
  };
  const double split = 4.0;
  quad::Result a = quad::adaptive(small, 0.0, split, {tol, 1e-14});
  auto osc = [&](double rho) { return std::pow(rho, -1.0 - s2) * sphere_fourier(N, rho); };
  quad::Result b = quad::oscillatory(osc, split, M_PI, {tol, 1e-14});
  const double inv = a.value + area * std::pow(split, -s2) / s2 - b.value;
  ValueError r;
  r.value = 1.0 / inv;
  r.error = (a.error + b.error) / (inv * inv);
  if (!b.converged) throw ConvergenceError("normalization integral: oscillatory tail did not converge");
  return r;
}

ValueError flap_pv(const ScalarField& u, const Point& x, const FracOrder& fo, double tol, PvOptions opt) {
  check_point(u, x, fo);
  if (u.smoothness < Smoothness::C2)
    throw SingularityError("flap_pv requires a field of smoothness C2 or better at the evaluation point");
  const int N = fo.N;
  const double r = norm(x);
  const double ux = u(x);
  const bool radial = u.is_radial();
  const double area = sphere_area(N);
  const double sphere_abs = opt.sphere_tol * area * (std::abs(ux) + u.sup) + 1e-300;

  Shell sh;
  sh.s = fo.s;
  sh.delta = opt.delta > 0.0 ? opt.delta : 1e-2 * (1.0 + r);
  sh.eta = 0.1 * sh.delta;
  sh.T = opt.truncation > 0.0 ? opt.truncation : std::max({50.0, 10.0 * u.support, 2.0 * (r + 1.0)});
  if (u.decay == DecayClass::COMPACT) sh.T = std::max(sh.T, r + u.support);
  sh.quartic = u.smoothness == Smoothness::CINF;
  const auto& f = u.radial;
  sh.Q = [&](double rho) {
    return sphere_integral(
        N, x, r, radial, rho, [&](double d) { return ux - f(d); }, [&](const Point& y) { return ux - u(y); },
        sphere_abs, opt.sphere_tol);
  };
  if (decays(u)) {
    sh.q_inf = area * ux;
    sh.tail_sup = [&](double rho) { return area * field_bound(u, r, rho); };
  } else {
    sh.q_inf = 0.0;
    sh.tail_sup = [&](double) { return area * (std::abs(ux) + u.amplitude); };
  }
  sh.cuts = graded_cuts(r, sh.delta);
  if (u.decay == DecayClass::COMPACT) {
    sh.cuts.push_back(r + u.support);
    if (std::abs(r - u.support) > sh.delta) sh.cuts.push_back(std::abs(r - u.support));
  }
  const double C = normalization_constant(fo);
  ValueError v = shell_integral(sh, tol / C);
  v.value *= C;
  v.error *= C;
  return v;
}

ValueError bilinear_form(const ScalarField& f, const ScalarField& g, const Point& x, const FracOrder& fo, double tol,
                         PvOptions opt) {
  check_point(f, x, fo);
  if (g.dim != fo.N) throw ParameterError("field dimensions differ");
  if (f.smoothness < Smoothness::C1 || g.smoothness < Smoothness::C1)
    throw SingularityError("bilinear_form requires C1 fields");
  const int N = fo.N;
  const double r = norm(x);
  const double fx = f(x);
  const double gx = g(x);
  const bool radial = f.is_radial() && g.is_radial();
  const double area = sphere_area(N);
  const double scale = (std::abs(fx) + f.sup) * (std::abs(gx) + g.sup);
  const double sphere_abs = opt.sphere_tol * area * scale + 1e-300;

  Shell sh;
  sh.s = fo.s;
  sh.delta = opt.delta > 0.0 ? opt.delta : 1e-2 * (1.0 + r);
  sh.eta = 0.1 * sh.delta;
  const double support = std::max(f.decay == DecayClass::COMPACT ? f.support : 0.0,
                                   g.decay == DecayClass::COMPACT ? g.support : 0.0);
  sh.T = opt.truncation > 0.0 ? opt.truncation : std::max({50.0, 10.0 * support, 2.0 * (r + 1.0)});
  sh.quartic = f.smoothness == Smoothness::CINF && g.smoothness == Smoothness::CINF;
  const auto& fr = f.radial;
  const auto& gr = g.radial;
  sh.Q = [&](double rho) {
    return sphere_integral(
        N, x, r, radial, rho, [&](double d) { return (fx - fr(d)) * (gx - gr(d)); },
        [&](const Point& y) { return (fx - f(y)) * (gx - g(y)); }, sphere_abs, opt.sphere_tol);
  };
  if (decays(f) && decays(g)) {
    sh.q_inf = area * fx * gx;
    sh.tail_sup = [&](double rho) {
      const double bf = field_bound(f, r, rho);
      const double bg = field_bound(g, r, rho);
      return area * (std::abs(fx) * bg + std::abs(gx) * bf + bf * bg);
    };
  } else {
    sh.q_inf = 0.0;
    sh.tail_sup = [&](double rho) {
      return area * (std::abs(fx) + field_bound(f, r, rho)) * (std::abs(gx) + field_bound(g, r, rho));
    };
  }
  sh.cuts = graded_cuts(r, sh.delta);
  for (const ScalarField* h : {&f, &g}) {
    if (h->decay != DecayClass::COMPACT) continue;
    sh.cuts.push_back(r + h->support);
    if (std::abs(r - h->support) > sh.delta) sh.cuts.push_back(std::abs(r - h->support));
  }
  const double C = normalization_constant(fo);
  ValueError v = shell_integral(sh, tol / C);
  v.value *= C;
  v.error *= C;
  return v;
}

// ---------------------------------------------------------------------------

RadialClosedForm::RadialClosedForm(double beta, const FracOrder& fo, double tol) : beta_(beta), fo_(fo) {
  fo.validate();
  if (!(beta > 0.0)) throw ParameterError("weight exponent beta must be positive");
  const ScalarField psi = weight_field(fo.N, beta);
  auto pv_at = [&](double r) {
    Point x(fo.N, 0.0);
    x[0] = r;
    return flap_pv(psi, x, fo, tol).value;
  };
  double num = 0.0;
  double den = 0.0;
  std::vector<double> g, h;
  for (int i = 0; i < 20; ++i) {
    const double r = 2.0 + 3.0 * i / 19.0;
    g.push_back(pv_at(r));
    h.push_back(shape(r));
    num += g.back() * h.back();
    den += h.back() * h.back();
  }
  if (!(den > 0.0)) throw CalibrationError("closed-form calibration: shape vanishes on the window");
  constant_ = num / den;
  double gmax = 0.0;
  for (double v : g) gmax = std::max(gmax, std::abs(v));
  residual_ = 0.0;
  for (size_t i = 0; i < g.size(); ++i) residual_ = std::max(residual_, std::abs(g[i] - constant_ * h[i]) / gmax);
  validation_ = 0.0;
  for (double r : {8.0, 10.0, 15.0}) {
    const double q = pv_at(r);
    const double c = constant_ * shape(r);
    validation_ = std::max(validation_, std::abs(q - c) / std::abs(q));
  }
  if (!(validation_ <= 1e-3)) {
    std::ostringstream os;
    os << "closed-form calibration failed validation: relative error " << validation_ << " at r in {8,10,15}";
    throw CalibrationError(os.str());
  }
}

double RadialClosedForm::shape(double r) const {
  const double s = fo_.s;
  HypParams p{0.5 * fo_.N + s, 0.5 * beta_ + s, 0.5 * fo_.N, -r * r};
  return pfaff_evaluate(pfaff_transform(p));
}

double RadialClosedForm::flap(double r) const { return constant_ * shape(r); }

double RadialClosedForm::classical_constant() const {
  const double s = fo_.s;
  return std::pow(2.0, 2.0 * s) * gamma_fn(0.5 * beta_ + s) * gamma_fn(0.5 * fo_.N + s) /
         (gamma_fn(0.5 * beta_) * gamma_fn(0.5 * fo_.N));
}

const RadialClosedForm& radial_closed_form(double beta, const FracOrder& fo) {
  static std::mutex mu;
  static std::map<std::tuple<int, double, double>, std::unique_ptr<RadialClosedForm>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_tuple(fo.N, fo.s, beta);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, std::make_unique<RadialClosedForm>(beta, fo)).first;
  return *it->second;
}

ClosedFormValue flap_radial_closed_form(double beta, const FracOrder& fo, double r) {
  if (!(r > 1.0)) throw DomainError("flap_radial_closed_form: requires r > 1");
  const RadialClosedForm& cf = radial_closed_form(beta, fo);
  return ClosedFormValue{cf.neg_flap(r), cf.constant()};
}

SupersolutionCriterion radial_supersolution_criterion(double beta, const FracOrder& fo) {
  fo.validate();
  if (!(beta > 0.0)) throw ParameterError("weight exponent beta must be positive");
  SupersolutionCriterion c;
  const double d = fo.N - 2.0 * fo.s;
  c.holds = beta <= d + 1e-12;
  for (int i = 0; i < 40; ++i) {
    const double r = std::pow(10.0, -2.0 + 5.0 * i / 39.0);
    const double q = 1.0 + r * r;
    const double d1 = -beta * r * std::pow(q, -0.5 * beta - 1.0);
    const double d2 = -beta * std::pow(q, -0.5 * beta - 1.0) + beta * (beta + 2.0) * r * r * std::pow(q, -0.5 * beta - 2.0);
    c.radii.push_back(r);
    c.lhs.push_back(d2 + (d + 1.0) / r * d1);
  }
  return c;
}

double cutoff_profile(double t) {
  if (t <= 0.5) return 1.0;
  if (t >= 1.0) return 0.0;
  const double a = std::exp(-1.0 / (1.0 - t));
  const double b = std::exp(-1.0 / (t - 0.5));
  return a / (a + b);
}

ScalarField cutoff_field(const CutoffFamily& cf, int dim) {
  ScalarField u = ScalarField::from_radial(
      dim, [cf](double r) { return cf(r); }, DecayClass::COMPACT, 0.0, 1.0, cf.R, 1.0, "cutoff");
  return u;
}

ValueError cutoff_flap(const CutoffFamily& cf, const Point& x, const FracOrder& fo, double tol) {
  if (!(cf.R > 0.0)) throw ParameterError("cutoff scale R must be positive");
  PvOptions opt;
  opt.truncation = std::max({50.0, 10.0 * cf.R, 2.0 * (norm(x) + 1.0)});
  return flap_pv(cutoff_field(cf, fo.N), x, fo, tol * std::pow(cf.R, -2.0 * fo.s), opt);
}

ConvexityReport convexity_check(const ScalarField& u, double p_exp, double alpha_reg, const std::vector<Point>& points,
                                const FracOrder& fo, double tol) {
  if (!(p_exp >= 1.0)) throw ParameterError("convexity_check requires p >= 1");
  if (!(alpha_reg > 0.0)) throw ParameterError("convexity_check requires alpha > 0");
  auto G = [p_exp, alpha_reg](double v) { return std::pow(v * v + alpha_reg, 0.5 * p_exp); };
  auto dG = [p_exp, alpha_reg](double v) { return p_exp * v * std::pow(v * v + alpha_reg, 0.5 * p_exp - 1.0); };
  const double g0 = G(0.0);
  // G(u) - G(0) has the same decay class as u with amplitude scaled by sup |G'|.
  ScalarField gu = u;
  auto ue = u.eval;
  gu.eval = [ue, G, g0](const Point& y) { return G(ue(y)) - g0; };
  if (u.radial) {
    auto ur = u.radial;
    gu.radial = [ur, G, g0](double d) { return G(ur(d)) - g0; };
  }
  const double lip = dG(u.sup);
  gu.amplitude = u.amplitude * lip;
  gu.sup = G(u.sup) - g0;
  gu.name = "G(u)";

  ConvexityReport rep;
  rep.max_violation = -std::numeric_limits<double>::infinity();
  for (const Point& x : points) {
    ConvexityPoint cp;
    cp.x = x;
    ValueError l = flap_pv(gu, x, fo, 1e-11);
    ValueError r = flap_pv(u, x, fo, 1e-11);
    cp.lhs = l.value;
    cp.rhs = dG(u(x)) * r.value;
    cp.error = l.error + std::abs(dG(u(x))) * r.error;
    rep.max_violation = std::max(rep.max_violation, cp.lhs - cp.rhs);
    rep.points.push_back(cp);
  }
  rep.pass = rep.max_violation <= tol;
  return rep;
}

}  // namespace fraccert
