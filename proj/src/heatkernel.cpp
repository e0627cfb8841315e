#include "fraccert/heatkernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fraccert/errors.hpp"
#include "fraccert/quadrature.hpp"
#include "fraccert/specfun.hpp"

namespace fraccert {

namespace {

constexpr int kTaylorTerms = 6;
constexpr int kAsymptoticTerms = 240;

// Fixed 21-point Gauss-Kronrod rule (exact for the cubic interpolant times r^{N-1}, N <= 3).
template <class F>
double gk_fixed(F&& f, double a, double b) {
  return quad::gk21(f, a, b).value;
}

}  // namespace

KernelProfile::KernelProfile(const FracOrder& fo, Normalization norm, ProfileOptions opt)
    : fo_(fo), norm_(norm), opt_(opt) {
  fo.validate();
  if (!(opt.x_max > 1.0) || opt.nodes_per_decade < 10) throw ParameterError("invalid kernel tabulation options");
  const int N = fo.N;
  const double s = fo.s;
  factor_ = norm == Normalization::UNIT_MASS ? std::pow(2.0 * M_PI, -N) : 1.0;

  // Taylor coefficients m_k = M_{2k} / (4^k k! (N/2)_k), M_{2k} = |S| Gamma((N+2k)/2s) / 2s.
  const double log_area = std::log(sphere_area(N));
  for (int k = 0; k <= kTaylorTerms; ++k) {
    double lg = log_area + std::lgamma((N + 2.0 * k) / (2.0 * s)) - std::log(2.0 * s);
    lg -= k * std::log(4.0) + std::lgamma(k + 1.0) + std::lgamma(0.5 * N + k) - std::lgamma(0.5 * N);
    moments_.push_back(std::exp(lg));
  }
  // Asymptotic series coefficients of r^{-2sk-N}.
  for (int k = 1; k <= kAsymptoticTerms; ++k) {
    const double sn = std::sin(M_PI * s * k);
    if (std::abs(sn) < 1e-13) {
      asym_.push_back(0.0);
      continue;
    }
    double lg = -std::lgamma(k + 1.0) + (2.0 * s * k + N) * std::log(2.0) + (0.5 * N - 1.0) * std::log(M_PI) +
                std::lgamma(s * k + 0.5 * N) + std::lgamma(1.0 + s * k) + std::log(std::abs(sn));
    const double sign = ((k % 2 == 1) ? 1.0 : -1.0) * (sn > 0.0 ? 1.0 : -1.0);
    asym_.push_back(lg > 700.0 ? sign * std::numeric_limits<double>::infinity() : sign * std::exp(lg));
  }

  // Lower end of the table: the first omitted Taylor term is below 1e-17 of P(0).
  double xmin = std::pow(1e-17 * moments_[0] / moments_[kTaylorTerms], 1.0 / (2.0 * kTaylorTerms));
  xmin = std::clamp(xmin, 1e-4, 0.05);
  const int n = static_cast<int>(std::ceil(opt.nodes_per_decade * std::log10(opt.x_max / xmin))) + 1;
  x_.resize(n);
  p_.resize(n);
  d_.resize(n);
  for (int i = 0; i < n; ++i) {
    x_[i] = xmin * std::pow(opt.x_max / xmin, static_cast<double>(i) / (n - 1));
    p_[i] = quadrature(x_[i]) / factor_;
    d_[i] = quadrature_derivative(x_[i]) / factor_;
  }
  x_.back() = opt.x_max;
  // Fritsch-Carlson limiter on the exact slopes.
  for (int i = 0; i + 1 < n; ++i) {
    const double delta = (p_[i + 1] - p_[i]) / (x_[i + 1] - x_[i]);
    if (delta == 0.0) {
      d_[i] = d_[i + 1] = 0.0;
      continue;
    }
    const double a = d_[i] / delta;
    const double b = d_[i + 1] / delta;
    if (a < 0.0) d_[i] = 0.0;
    if (b < 0.0) d_[i + 1] = 0.0;
    const double q = a * a + b * b;
    if (q > 9.0) {
      const double tau = 3.0 / std::sqrt(q);
      d_[i] = tau * a * delta;
      d_[i + 1] = tau * b * delta;
    }
  }
  edge_mismatch_ = std::abs(raw_asymptotic(opt.x_max, false) - p_.back()) / p_.back();

  // Raw mass: Taylor part, table part, asymptotic tail.
  const double area = sphere_area(N);
  double mass = 0.0;
  for (int k = 0; k < kTaylorTerms; ++k) {
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    mass += sign * moments_[k] * std::pow(xmin, 2.0 * k + N) / (2.0 * k + N);
  }
  mass *= area;
  for (int i = 0; i + 1 < n; ++i)
    mass += area * gk_fixed([&](double r) { return std::pow(r, N - 1) * profile(r) / factor_; }, x_[i], x_[i + 1]);
  mass += raw_tail_mass(opt.x_max);
  mass_ = mass * factor_;
}

double KernelProfile::quadrature(double r) const {
  r = std::abs(r);
  const int N = fo_.N;
  const double s2 = 2.0 * fo_.s;
  if (r == 0.0) return factor_ * moments_[0];
  const double rho_max = std::pow(46.0, 1.0 / s2);
  auto f = [&](double rho) {
    return std::exp(-std::pow(rho, s2)) * std::pow(rho, N - 1) * sphere_fourier(N, r * rho);
  };
  quad::Result q = quad::oscillatory(f, 0.0, M_PI / r, {opt_.tol, 1e-14}, rho_max);
  if (!q.converged) {
    std::ostringstream os;
    os << "kernel profile quadrature did not converge at |x|=" << r;
    throw ConvergenceError(os.str());
  }
  return factor_ * q.value;
}

double KernelProfile::quadrature_derivative(double r) const {
  r = std::abs(r);
  const int N = fo_.N;
  const double s2 = 2.0 * fo_.s;
  if (r == 0.0) return 0.0;
  const double rho_max = std::pow(46.0, 1.0 / s2);
  auto f = [&](double rho) {
    return std::exp(-std::pow(rho, s2)) * std::pow(rho, N) * sphere_fourier_derivative(N, r * rho);
  };
  quad::Result q = quad::oscillatory(f, 0.0, M_PI / r, {opt_.tol, 1e-14}, rho_max);
  if (!q.converged) {
    std::ostringstream os;
    os << "kernel derivative quadrature did not converge at |x|=" << r;
    throw ConvergenceError(os.str());
  }
  return factor_ * q.value;
}

double KernelProfile::raw_taylor(double r) const {
  double sum = 0.0;
  const double r2 = r * r;
  double pw = 1.0;
  for (int k = 0; k < kTaylorTerms; ++k) {
    sum += ((k % 2 == 0) ? 1.0 : -1.0) * moments_[k] * pw;
    pw *= r2;
  }
  return sum;
}

double KernelProfile::raw_taylor_derivative(double r) const {
  double sum = 0.0;
  const double r2 = r * r;
  double pw = r;
  for (int k = 1; k < kTaylorTerms; ++k) {
    sum += ((k % 2 == 0) ? 1.0 : -1.0) * 2.0 * k * moments_[k] * pw;
    pw *= r2;
  }
  return sum;
}

int KernelProfile::asymptotic_terms(double r) const {
  const double s2 = 2.0 * fo_.s;
  const double lr = std::log(r);
  double prev = std::numeric_limits<double>::infinity();
  int used = 0;
  double sum = 0.0;
  for (int k = 1; k <= kAsymptoticTerms; ++k) {
    const double a = asym_[k - 1];
    if (a == 0.0) continue;
    if (!std::isfinite(a)) break;
    const double term = std::abs(a) * std::exp(-(s2 * k + fo_.N) * lr);
    if (term > prev) break;
    prev = term;
    sum += term;
    used = k;
    if (term < 1e-17 * sum) break;
  }
  return used;
}

double KernelProfile::raw_asymptotic(double r, bool derivative) const {
  const double s2 = 2.0 * fo_.s;
  const int N = fo_.N;
  const int kmax = asymptotic_terms(r);
  const double lr = std::log(r);
  double sum = 0.0;
  for (int k = 1; k <= kmax; ++k) {
    const double a = asym_[k - 1];
    if (a == 0.0) continue;
    const double e = s2 * k + N;
    const double term = a * std::exp(-e * lr);
    sum += derivative ? -e * term / r : term;
  }
  return sum;
}

double KernelProfile::raw_tail_mass(double X) const {
  // |S| int_X^inf r^{N-1} sum_k a_k r^{-2sk-N} dr = |S| sum_k a_k X^{-2sk} / (2sk)
  const double s2 = 2.0 * fo_.s;
  const int kmax = asymptotic_terms(X);
  double sum = 0.0;
  for (int k = 1; k <= kmax; ++k) {
    const double a = asym_[k - 1];
    if (a == 0.0) continue;
    sum += a * std::pow(X, -s2 * k) / (s2 * k);
  }
  return sphere_area(fo_.N) * sum;
}

double KernelProfile::taylor(double r) const { return factor_ * raw_taylor(std::abs(r)); }
double KernelProfile::asymptotic(double r) const { return factor_ * raw_asymptotic(std::abs(r), false); }

double KernelProfile::profile(double r) const {
  r = std::abs(r);
  if (r <= x_.front()) return factor_ * raw_taylor(r);
  if (r >= x_.back()) return factor_ * raw_asymptotic(r, false);
  const double span = std::log(x_.back() / x_.front());
  size_t i = static_cast<size_t>(std::floor(std::log(r / x_.front()) / span * (x_.size() - 1)));
  i = std::min(i, x_.size() - 2);
  while (i > 0 && r < x_[i]) --i;
  while (i + 2 < x_.size() && r > x_[i + 1]) ++i;
  const double h = x_[i + 1] - x_[i];
  const double t = (r - x_[i]) / h;
  const double t2 = t * t;
  const double t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1;
  const double h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2;
  const double h11 = t3 - t2;
  return factor_ * (h00 * p_[i] + h10 * h * d_[i] + h01 * p_[i + 1] + h11 * h * d_[i + 1]);
}

double KernelProfile::profile_derivative(double r) const {
  const double sgn = r < 0.0 ? -1.0 : 1.0;
  r = std::abs(r);
  if (r <= x_.front()) return sgn * factor_ * raw_taylor_derivative(r);
  if (r >= x_.back()) return sgn * factor_ * raw_asymptotic(r, true);
  const size_t i = static_cast<size_t>(std::upper_bound(x_.begin(), x_.end(), r) - x_.begin()) - 1;
  const double h = x_[i + 1] - x_[i];
  const double t = (r - x_[i]) / h;
  const double t2 = t * t;
  const double dh00 = (6 * t2 - 6 * t) / h;
  const double dh10 = 3 * t2 - 4 * t + 1;
  const double dh01 = (-6 * t2 + 6 * t) / h;
  const double dh11 = 3 * t2 - 2 * t;
  return sgn * factor_ * (dh00 * p_[i] + dh10 * d_[i] + dh01 * p_[i + 1] + dh11 * d_[i + 1]);
}

double KernelProfile::kernel(double r, double t) const {
  if (!(t > 0.0)) throw ParameterError("kernel evaluation requires t > 0");
  const double s2 = 2.0 * fo_.s;
  const double ell = std::pow(t, 1.0 / s2);
  return std::pow(ell, -fo_.N) * profile(r / ell);
}

double KernelProfile::tail_mass(double d, double t) const {
  if (!(t > 0.0)) throw ParameterError("tail mass requires t > 0");
  const int N = fo_.N;
  const double X = std::abs(d) / std::pow(t, 1.0 / (2.0 * fo_.s));
  const double area = sphere_area(N);
  if (X >= x_.back()) return factor_ * raw_tail_mass(X);
  double inner = 0.0;  // raw mass inside |z| < X
  const double xmin = x_.front();
  const double top = std::min(X, xmin);
  for (int k = 0; k < kTaylorTerms; ++k)
    inner += ((k % 2 == 0) ? 1.0 : -1.0) * moments_[k] * std::pow(top, 2.0 * k + N) / (2.0 * k + N);
  inner *= area;
  if (X > xmin) {
    auto g = [&](double r) { return std::pow(r, N - 1) * profile(r) / factor_; };
    for (size_t i = 0; i + 1 < x_.size() && x_[i] < X; ++i) inner += area * gk_fixed(g, x_[i], std::min(X, x_[i + 1]));
  }
  return std::max(0.0, mass_ - factor_ * inner);
}

double profile_eval(const KernelProfile& kp, const Point& x) {
  if (static_cast<int>(x.size()) != kp.order().N) throw ParameterError("point dimension differs from kernel dimension");
  return kp.profile(norm(x));
}

double kernel_eval(const KernelProfile& kp, const Point& x, double t) {
  if (static_cast<int>(x.size()) != kp.order().N) throw ParameterError("point dimension differs from kernel dimension");
  return kp.kernel(norm(x), t);
}

BoundReport bound_check(const KernelProfile& kp, const std::vector<double>& xs, const std::vector<double>& ts,
                        double spread_limit) {
  const int N = kp.order().N;
  const double s2 = 2.0 * kp.order().s;
  BoundReport rep;
  rep.spread_limit = spread_limit;
  rep.min_ratio = std::numeric_limits<double>::infinity();
  rep.max_ratio = 0.0;
  bool finite = true;
  for (double t : ts) {
    for (double x : xs) {
      const double ax = std::abs(x);
      const double near = std::pow(t, -N / s2);
      const double far = ax > 0.0 ? t * std::pow(ax, -N - s2) : std::numeric_limits<double>::infinity();
      const double ratio = kp.kernel(ax, t) / std::min(near, far);
      if (!std::isfinite(ratio) || !(ratio > 0.0)) finite = false;
      rep.min_ratio = std::min(rep.min_ratio, ratio);
      rep.max_ratio = std::max(rep.max_ratio, ratio);
    }
  }
  rep.spread = rep.max_ratio / rep.min_ratio;
  rep.C = std::max(rep.max_ratio, 1.0 / rep.min_ratio);
  rep.pass = finite && rep.min_ratio > 0.0 && std::isfinite(rep.spread) && rep.spread <= spread_limit;
  return rep;
}

GridField convolution_solution(const GridField& u0, double t, const KernelProfile& kp, ConvolutionOptions opt) {
  const PeriodicGrid& g = u0.grid;
  g.validate();
  if (g.N != 1 || kp.order().N != 1) throw ParameterError("convolution_solution supports N = 1 grids");
  if (kp.normalization() != Normalization::UNIT_MASS)
    throw ParameterError("convolution_solution requires a UNIT_MASS kernel");
  if (!(t >= 0.0)) throw ParameterError("convolution time must be nonnegative");
  if (t == 0.0) return u0;

  const int M = g.M;
  const double h = g.h();
  const double L = g.L;
  const double s2 = 2.0 * kp.order().s;
  const double ell = std::pow(t, 1.0 / s2);
  const bool point = ell >= 4.0 * h;

  // Mass of the kernel in [a, b] (a < b).
  auto cdf = [&](double z) {
    const double half = 0.5 * (1.0 - kp.tail_mass(std::abs(z), t));
    return z < 0.0 ? -half : half;
  };
  auto weight = [&](double y) {
    if (point) return h * kp.kernel(std::abs(y), t);
    return std::max(0.0, cdf(y + 0.5 * h) - cdf(y - 0.5 * h));
  };

  if (opt.mode == BoundaryMode::FREE_SPACE) {
    double reach = 0.0;
    const double umax = u0.max_abs();
    for (int j = 0; j < M; ++j)
      if (std::abs(u0.values[j]) > 1e-14 * umax) reach = std::max(reach, std::abs(g.coord(j)));
    const double room = L - reach;
    const double lost = room > 0.0 ? kp.tail_mass(room, t) : 1.0;
    if (lost > opt.max_tail_mass) {
      std::ostringstream os;
      os << "box too small: kernel tail mass " << lost << " beyond distance " << room << " exceeds "
         << opt.max_tail_mass;
      throw BoxTooSmallError(os.str());
    }
    std::vector<double> w(2 * M - 1);
    for (int m = -(M - 1); m <= M - 1; ++m) w[m + M - 1] = weight(m * h);
    GridField out = GridField::zeros(g);
    for (int i = 0; i < M; ++i) {
      double acc = 0.0;
      for (int j = 0; j < M; ++j) acc += w[i - j + M - 1] * u0.values[j];
      out.values[i] = acc;
    }
    return out;
  }

  // Periodised weights: explicit images plus a midpoint-integral tail,
  // sum_{j > J} W(y + jP) ~ (h / P) int_{(J + 1/2) P + y}^inf p(z, t) dz.
  const int J = opt.images;
  const double period = 2.0 * L;
  std::vector<double> w(M);
  for (int m = 0; m < M; ++m) {
    const double y = m * h;
    double acc = 0.0;
    for (int j = -J; j <= J; ++j) acc += weight(y + period * j);
    const double far_pos = period * (J + 0.5) + y;
    const double far_neg = period * (J + 0.5) - y;
    acc += 0.5 * h / period * (kp.tail_mass(far_pos, t) + kp.tail_mass(far_neg, t));
    w[m] = acc;
  }
  GridField out = GridField::zeros(g);
  for (int i = 0; i < M; ++i) {
    double acc = 0.0;
    for (int j = 0; j < M; ++j) {
      int m = i - j;
      if (m < 0) m += M;
      acc += w[m] * u0.values[j];
    }
    out.values[i] = acc;
  }
  return out;
}

}  // namespace fraccert
