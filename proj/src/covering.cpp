#include "fraccert/covering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "fraccert/errors.hpp"
#include "fraccert/fraclap.hpp"
#include "fraccert/quadrature.hpp"
#include "fraccert/specfun.hpp"

namespace fraccert {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Range {
  double lo = 0.0;
  double hi = kInf;
};

// Radial ranges (|x|, |y|) of A1..A5 at scale R.
std::array<std::pair<Range, Range>, 5> region_ranges(double R) {
  return {{
      {{R / 2, kInf}, {0.0, R / 8}},
      {{0.0, R / 8}, {R / 2, kInf}},
      {{2 * R, kInf}, {R / 8, R}},
      {{R / 8, R}, {2 * R, kInf}},
      {{R / 8, 2 * R}, {R / 8, 2 * R}},
  }};
}

double radial_value(const ScalarField& f, double r) {
  if (f.is_radial()) return f.radial(r);
  Point x(f.dim, 0.0);
  x[0] = r;
  return f.eval(x);
}

// Integral over [lo, hi) with breakpoints; hi may be infinite.  Pieces
// ending at `sing` are integrated in v with |y - sing| = v^m, which
// removes an integrable |y - sing|^{1/m - 1} singularity.
template <class F>
quad::Result integrate_range(F&& f, double lo, double hi, const std::vector<double>& cuts, quad::Tolerance tol,
                             double sing = std::numeric_limits<double>::quiet_NaN(), double m = 1.0) {
  std::vector<double> pts{lo};
  for (double c : cuts)
    if (c > lo && c < hi && std::isfinite(c)) pts.push_back(c);
  if (std::isfinite(hi)) pts.push_back(hi);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  quad::Result r;
  const double n = static_cast<double>(pts.size());
  const quad::Tolerance piece{tol.abs / n, tol.rel};
  for (size_t i = 0; i + 1 < pts.size(); ++i) {
    const double a = pts[i];
    const double b = pts[i + 1];
    quad::Result p;
    if (m != 1.0 && (a == sing || b == sing)) {
      const double sign = a == sing ? 1.0 : -1.0;
      auto g = [&](double v) { return f(sing + sign * std::pow(v, m)) * m * std::pow(v, m - 1.0); };
      p = quad::adaptive(g, 0.0, std::pow(b - a, 1.0 / m), piece);
    } else {
      p = quad::adaptive(f, a, b, piece);
    }
    r.value += p.value;
    r.error += p.error;
    r.evaluations += p.evaluations;
    r.converged = r.converged && p.converged;
  }
  if (!std::isfinite(hi)) {
    const double start = pts.back();
    quad::Result t = quad::semi_infinite(f, start, std::max(start, 1.0), tol);
    r.value += t.value;
    r.error += t.error;
    r.evaluations += t.evaluations;
    r.converged = r.converged && t.converged;
  }
  return r;
}

struct Integrand1D {
  const ScalarField& u;
  const ScalarField& phi;
  CutoffFamily gamma;
  double q;  // 1 + 2s
  double s;

  double G(double x, double y) const {
    const double d = std::abs(x - y);
    if (d == 0.0) return 0.0;
    // Below delta the differences cancel; use the chord slopes at delta instead.
    const double delta = 1e-6 * (1.0 + std::abs(x));
    if (d < delta) {
      const double yd = y > x ? x + delta : x - delta;
      const double a = chord(x, yd) / (delta * delta);
      return a * d * d / std::pow(d, q);
    }
    return chord(x, y) / std::pow(d, q);
  }

  double chord(double x, double y) const {
    const double dphi = std::abs(radial_value(phi, std::abs(x)) - radial_value(phi, std::abs(y)));
    const double dg = std::abs(gamma(std::abs(x)) - gamma(std::abs(y)));
    return dphi * dg;
  }
};

// 2 int_{x in X, x > 0} |u(x)| [int_{y in Y} G(x, y) + G(x, -y) dy] dx  (N = 1, even fields)
quad::Result nested_1d(const Integrand1D& in, Range X, Range Y, double R, double tol) {
  std::vector<double> xcuts{R / 8, R / 2, R, 2 * R, 4 * R};
  auto outer = [&](double x) {
    const double ux = std::abs(radial_value(in.u, x));
    if (ux == 0.0) return 0.0;
    std::vector<double> cuts{R / 8, R / 2, R, 2 * R, x, 2 * x + 4 * R};
    auto fp = [&](double y) { return in.G(x, y); };
    auto fm = [&](double y) { return in.G(x, -y); };
    // Near y = x the integrand behaves like |x - y|^{1-2s}.
    const double m = 1.0 / (2.0 - 2.0 * in.s);
    quad::Result a = integrate_range(fp, Y.lo, Y.hi, cuts, {1e-300, tol * 1e-3}, x, m);
    quad::Result b = integrate_range(fm, Y.lo, Y.hi, cuts, {1e-300, tol * 1e-3});
    return ux * (a.value + b.value);
  };
  quad::Result r = integrate_range(outer, X.lo, X.hi, xcuts, {1e-300, tol});
  r.value *= 2.0;
  r.error *= 2.0;
  return r;
}

double shell_integral(const ScalarField& u, int N, double beta, Range X, bool power_weight) {
  auto f = [&](double r) {
    const double w = power_weight ? std::pow(r, -beta) : std::pow(1.0 + r * r, -0.5 * beta);
    return std::pow(r, N - 1) * std::abs(radial_value(u, r)) * w;
  };
  quad::Result q = integrate_range(f, X.lo, X.hi, {1.0, 10.0}, {1e-300, 1e-9});
  return sphere_area(N) * q.value;
}

Point random_direction(int N, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Point v(N);
  double n2 = 0.0;
  for (auto& c : v) {
    c = g(rng);
    n2 += c * c;
  }
  const double n = std::sqrt(n2);
  for (auto& c : v) c /= n;
  return v;
}

// Radius sampler on [lo, hi]: uniform in the ball when lo = 0, log-uniform otherwise.
// Returns r and the weight r^{N-1} |S| / pdf(r).
std::pair<double, double> sample_radius(Range rg, int N, std::uniform_real_distribution<double>& U,
                                        std::mt19937_64& rng) {
  const double area = sphere_area(N);
  const double hi = std::isfinite(rg.hi) ? rg.hi : rg.lo * 1e4;
  if (rg.lo == 0.0) {
    const double r = hi * std::pow(U(rng), 1.0 / N);
    return {r, area * std::pow(hi, N) / N};
  }
  const double L = std::log(hi / rg.lo);
  const double r = rg.lo * std::exp(L * U(rng));
  return {r, area * std::pow(r, N) * L};
}

RegionValue monte_carlo_region(const ScalarField& u, const ScalarField& phi, const CutoffFamily& gamma, double q,
                               Range X, Range Y, long samples, std::uint64_t seed) {
  const int N = u.dim;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  double sum = 0.0;
  double sum2 = 0.0;
  for (long i = 0; i < samples; ++i) {
    auto [rx, wx] = sample_radius(X, N, U, rng);
    auto [ry, wy] = sample_radius(Y, N, U, rng);
    const Point ex = random_direction(N, rng);
    const Point ey = random_direction(N, rng);
    double d2 = 0.0;
    for (int k = 0; k < N; ++k) {
      const double dk = rx * ex[k] - ry * ey[k];
      d2 += dk * dk;
    }
    double v = 0.0;
    if (d2 > 0.0) {
      const double dphi = std::abs(phi.radial(rx) - phi.radial(ry));
      const double dg = std::abs(gamma(rx) - gamma(ry));
      v = std::abs(u.radial(rx)) * dphi * dg / std::pow(d2, 0.5 * q) * wx * wy;
    }
    sum += v;
    sum2 += v * v;
  }
  const double n = static_cast<double>(samples);
  const double mean = sum / n;
  RegionValue rv;
  rv.value = mean;
  rv.error = std::sqrt(std::max(0.0, sum2 / n - mean * mean) / n);
  return rv;
}

}  // namespace

std::string to_string(Region r) {
  switch (r) {
    case Region::A1: return "A1";
    case Region::A2: return "A2";
    case Region::A3: return "A3";
    case Region::A4: return "A4";
    case Region::A5: return "A5";
    case Region::C: return "C";
  }
  return "?";
}

std::vector<Region> region_membership(const Point& x, const Point& y, double R) {
  if (!(R > 0.0)) throw ParameterError("covering scale R must be positive");
  if (x.size() != y.size()) throw ParameterError("points of different dimension");
  const double a = norm(x);
  const double b = norm(y);
  std::vector<Region> out;
  if (a > R / 2 && b <= R / 8) out.push_back(Region::A1);
  if (a <= R / 8 && b > R / 2) out.push_back(Region::A2);
  if (a >= 2 * R && b > R / 8 && b < R) out.push_back(Region::A3);
  if (a > R / 8 && a < R && b >= 2 * R) out.push_back(Region::A4);
  if (a > R / 8 && a < 2 * R && b > R / 8 && b < 2 * R) out.push_back(Region::A5);
  if ((a <= R / 2 && b <= R / 2) || (a >= R && b >= R)) out.push_back(Region::C);
  return out;
}

RemainderReport remainder_integral(const ScalarField& u, const ScalarField& phi, double R, const FracOrder& fo,
                                   double beta, RemainderOptions opt) {
  fo.validate();
  if (!(R > 0.0)) throw ParameterError("covering scale R must be positive");
  if (u.dim != fo.N || phi.dim != fo.N) throw ParameterError("field dimension differs from N");
  const int N = fo.N;
  if (!u.is_radial() || !phi.is_radial()) throw ParameterError("region integrals need radial u and phi");

  RemainderReport rep;
  rep.R = R;
  const double C = normalization_constant(fo);
  const double q = N + 2.0 * fo.s;
  const CutoffFamily gamma{R};
  const auto ranges = region_ranges(R);
  // Shell normalisers, in the order of the region bounds.
  const std::array<std::pair<Range, bool>, 5> shells{{
      {{R / 2, kInf}, true},
      {{0.0, R / 8}, false},
      {{2 * R, kInf}, true},
      {{R / 8, R}, false},
      {{R / 8, 2 * R}, true},
  }};

  for (int k = 0; k < 5; ++k) {
    RegionValue rv;
    if (N == 1) {
      Integrand1D in{u, phi, gamma, q, fo.s};
      quad::Result r = nested_1d(in, ranges[k].first, ranges[k].second, R, opt.tol);
      rv.value = r.value;
      rv.error = r.error;
    } else {
      rv = monte_carlo_region(u, phi, gamma, q, ranges[k].first, ranges[k].second, opt.mc_samples,
                              opt.seed + static_cast<std::uint64_t>(k));
      rep.monte_carlo = true;
    }
    rv.region = static_cast<Region>(k);
    rv.value *= opt.tau * C;
    rv.error *= opt.tau * C;
    rv.shell = opt.tau * shell_integral(u, N, beta, shells[k].first, shells[k].second);
    rep.regions[k] = rv;
    rep.sum_regions += rv.value;
  }

  if (N == 1) {
    Integrand1D in{u, phi, gamma, q, fo.s};
    quad::Result r = nested_1d(in, {0.0, kInf}, {0.0, kInf}, R, opt.tol);
    rep.total = opt.tau * C * r.value;
    rep.total_error = opt.tau * C * r.error;
  } else {
    rep.total = rep.sum_regions;
    for (const auto& rv : rep.regions) rep.total_error += rv.error;
  }

  rep.weighted_norm = opt.tau * shell_integral(u, N, beta, {0.0, kInf}, false);
  if (opt.cutoff_term) {
    auto f = [&](double r) {
      const double ur = std::abs(radial_value(u, r));
      if (ur == 0.0) return 0.0;
      Point x(N, 0.0);
      x[0] = r;
      return std::pow(r, N - 1) * ur * radial_value(phi, r) * std::abs(cutoff_flap(gamma, x, fo, 1e-9).value);
    };
    quad::Result r = integrate_range(f, 0.0, kInf, {R / 2, R, 2 * R}, {1e-300, 1e-6});
    rep.cutoff_term = opt.tau * sphere_area(N) * r.value;
  }
  return rep;
}

DecayFit decay_rate_fit(const std::vector<std::pair<double, double>>& values) {
  if (values.size() < 4) throw DegenerateFitError("decay fit needs at least 4 scales");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(values.size());
  for (auto [R, I] : values) {
    if (!(R > 0.0) || !(I > 0.0) || !std::isfinite(I) || I < std::numeric_limits<double>::min())
      throw DegenerateFitError("decay fit needs positive finite values");
    const double x = std::log(R);
    const double y = std::log(I);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double den = n * sxx - sx * sx;
  if (!(std::abs(den) > 0.0)) throw DegenerateFitError("decay fit needs distinct scales");
  DecayFit fit;
  fit.exponent = (n * sxy - sx * sy) / den;
  fit.intercept = (sy - fit.exponent * sx) / n;
  for (auto [R, I] : values)
    fit.max_residual = std::max(fit.max_residual, std::abs(std::log(I) - fit.intercept - fit.exponent * std::log(R)));
  return fit;
}

CoveringScan covering_scan(const ScalarField& u, const ScalarField& phi, const std::vector<double>& Rs,
                           const FracOrder& fo, double beta, RemainderOptions opt) {
  CoveringScan scan;
  scan.fo = fo;
  for (double R : Rs) scan.reports.push_back(remainder_integral(u, phi, R, fo, beta, opt));
  for (int k = 0; k < 5; ++k) {
    std::vector<std::pair<double, double>> raw, shell;
    for (const auto& r : scan.reports) {
      raw.emplace_back(r.R, r.regions[k].value);
      shell.emplace_back(r.R, r.regions[k].value / r.regions[k].shell);
    }
    scan.raw_fits[k] = decay_rate_fit(raw);
    scan.shell_fits[k] = decay_rate_fit(shell);
  }
  std::vector<std::pair<double, double>> tot;
  scan.monotone = true;
  for (size_t i = 0; i < scan.reports.size(); ++i) {
    tot.emplace_back(scan.reports[i].R, scan.reports[i].total);
    if (i > 0 && !(scan.reports[i].total < scan.reports[i - 1].total)) scan.monotone = false;
  }
  scan.total_fit = decay_rate_fit(tot);
  scan.final_over_initial = scan.reports.back().total / scan.reports.front().total;
  return scan;
}

}  // namespace fraccert
