#include "fraccert/specfun.hpp"

#include <cmath>
#include <sstream>

#include <boost/math/special_functions/bessel.hpp>
#include <boost/math/special_functions/digamma.hpp>

#include "fraccert/errors.hpp"

namespace fraccert {

namespace {

constexpr double kSeriesTol = 1e-15;
constexpr long kMaxTerms = 100000;
constexpr double kIntegerGap = 1e-12;

bool nonpositive_integer(double x) { return x <= 0.0 && x == std::floor(x); }

std::string params_text(double a, double b, double c, double z) {
  std::ostringstream os;
  os.precision(17);
  os << "(a=" << a << ", b=" << b << ", c=" << c << ", z=" << z << ")";
  return os.str();
}

// Defining power series; terminates exactly when a or b is a nonpositive
// integer.
double series(double a, double b, double c, double z) {
  double term = 1.0;
  double sum = 1.0;
  for (long n = 0; n < kMaxTerms; ++n) {
    const double dn = static_cast<double>(n);
    term *= (a + dn) * (b + dn) / ((c + dn) * (dn + 1.0)) * z;
    sum += term;
    if (term == 0.0) return sum;
    if (std::abs(term) <= kSeriesTol * std::abs(sum)) {
      const double next = std::abs((a + dn + 1.0) * (b + dn + 1.0) / ((c + dn + 1.0) * (dn + 2.0)) * z);
      if (next < 1.0) return sum;
    }
  }
  throw ConvergenceError("hyp2f1: power series did not converge in 1e5 terms " + params_text(a, b, c, z));
}

// Connection formula around z = 1 for w = 1 - z in (0, 1/2].
double near_one(double a, double b, double c, double w) {
  const double d = c - a - b;
  const double m_real = std::round(d);
  if (std::abs(d - m_real) > kIntegerGap) {
    const double A = gamma_fn(c) * gamma_fn(d) * rgamma(c - a) * rgamma(c - b);
    const double B = gamma_fn(c) * gamma_fn(-d) * rgamma(a) * rgamma(b);
    double value = 0.0;
    if (A != 0.0) value += A * series(a, b, 1.0 - d, w);
    if (B != 0.0) value += B * std::pow(w, d) * series(c - a, c - b, 1.0 + d, w);
    return value;
  }

  // c - a - b = +-m: logarithmic cases.
  const int m = static_cast<int>(std::abs(m_real));
  const bool positive = m_real >= 0.0;
  const double lw = std::log(w);
  const double sign_m = (m % 2 == 0) ? 1.0 : -1.0;

  double finite_part = 0.0;
  double log_pref = 0.0;
  double pa = 0.0;  // shifted parameters entering the logarithmic sum
  double pb = 0.0;
  if (positive) {
    if (m >= 1) {
      const double pref = gamma_fn(m) * gamma_fn(c) * rgamma(a + m) * rgamma(b + m);
      double t = 1.0;
      double s = 1.0;
      for (int n = 0; n + 1 < m; ++n) {
        t *= (a + n) * (b + n) / ((n + 1.0) * (1.0 - m + n)) * w;
        s += t;
      }
      finite_part = pref * s;
    }
    log_pref = -sign_m * gamma_fn(c) * rgamma(a) * rgamma(b) * std::pow(w, m);
    pa = a + m;
    pb = b + m;
  } else {
    const double pref = gamma_fn(m) * gamma_fn(c) * rgamma(a) * rgamma(b) * std::pow(w, -m);
    double t = 1.0;
    double s = 1.0;
    for (int n = 0; n + 1 < m; ++n) {
      t *= (a - m + n) * (b - m + n) / ((n + 1.0) * (1.0 - m + n)) * w;
      s += t;
    }
    finite_part = pref * s;
    log_pref = -sign_m * gamma_fn(c) * rgamma(a - m) * rgamma(b - m);
    pa = a;
    pb = b;
  }
  if (log_pref == 0.0) return finite_part;

  // sum_n (pa)_n (pb)_n / (n! (n+m)!) w^n [ln w - psi(n+1) - psi(n+m+1) + psi(pa+n) + psi(pb+n)]
  double coef = 1.0 / std::tgamma(m + 1.0);
  double psi1 = digamma_fn(1.0);
  double psim = digamma_fn(m + 1.0);
  double psia = digamma_fn(pa);
  double psib = digamma_fn(pb);
  double sum = 0.0;
  for (long n = 0; n < kMaxTerms; ++n) {
    const double dn = static_cast<double>(n);
    const double term = coef * (lw - psi1 - psim + psia + psib);
    sum += term;
    if (n > 2 && std::abs(term) <= 0.1 * kSeriesTol * std::abs(sum)) return finite_part + log_pref * sum;
    coef *= (pa + dn) * (pb + dn) / ((dn + 1.0) * (dn + m + 1.0)) * w;
    psi1 += 1.0 / (dn + 1.0);
    psim += 1.0 / (dn + m + 1.0);
    psia += 1.0 / (pa + dn);
    psib += 1.0 / (pb + dn);
    if (coef == 0.0) return finite_part + log_pref * sum;
  }
  throw ConvergenceError("hyp2f1: logarithmic connection series did not converge " + params_text(a, b, c, 1.0 - w));
}

// Evaluation for z in [0, 1) given both z and its complement.
double unit_interval(double a, double b, double c, double z, double w) {
  if (z <= 0.5 || nonpositive_integer(a) || nonpositive_integer(b)) return series(a, b, c, z);
  return near_one(a, b, c, w);
}

void check_params(double a, double b, double c) {
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c))
    throw ParameterError("hyp2f1: non-finite parameter " + params_text(a, b, c, 0.0));
  if (nonpositive_integer(c))
    throw ParameterError("hyp2f1: c is zero or a negative integer " + params_text(a, b, c, 0.0));
}

}  // namespace

double gamma_fn(double x) {
  if (std::isnan(x)) throw DomainError("gamma_fn: NaN argument");
  if (nonpositive_integer(x)) {
    std::ostringstream os;
    os << "gamma_fn: pole at x=" << x;
    throw PoleError(os.str());
  }
  return std::tgamma(x);
}

double rgamma(double x) {
  if (nonpositive_integer(x)) return 0.0;
  if (x > 171.0) return 0.0;
  return 1.0 / std::tgamma(x);
}

double digamma_fn(double x) {
  if (nonpositive_integer(x)) {
    std::ostringstream os;
    os << "digamma_fn: pole at x=" << x;
    throw PoleError(os.str());
  }
  return boost::math::digamma(x);
}

double sphere_area(int n) { return 2.0 * std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n); }

double sphere_fourier(int N, double z) {
  z = std::abs(z);
  if (N == 1) return 2.0 * std::cos(z);
  if (N == 3) return z < 1e-3 ? 4.0 * M_PI * (1.0 - z * z / 6.0 + z * z * z * z / 120.0) : 4.0 * M_PI * std::sin(z) / z;
  const double nu = 0.5 * N - 1.0;
  if (z < 2.0) {
    // |S| Gamma(N/2) sum_k (-1)^k (z/2)^{2k} / (k! Gamma(k + N/2))
    const double q = -0.25 * z * z;
    double term = 1.0 / std::tgamma(0.5 * N);
    double sum = term;
    for (int k = 1; k < 60; ++k) {
      term *= q / (k * (k - 1.0 + 0.5 * N));
      sum += term;
      if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    return sphere_area(N) * std::tgamma(0.5 * N) * sum;
  }
  return std::pow(2.0 * M_PI, 0.5 * N) * std::pow(z, -nu) * boost::math::cyl_bessel_j(nu, z);
}

double sphere_fourier_derivative(int N, double z) {
  const double sgn = z < 0.0 ? -1.0 : 1.0;
  z = std::abs(z);
  if (N == 1) return -2.0 * sgn * std::sin(z);
  const double nu = 0.5 * N - 1.0;
  if (z < 2.0) {
    // -(2 pi)^{N/2} 2^{-nu-1} z sum_k (-1)^k (z/2)^{2k} / (k! Gamma(k + nu + 2))
    const double q = -0.25 * z * z;
    double term = 1.0 / std::tgamma(nu + 2.0);
    double sum = term;
    for (int k = 1; k < 60; ++k) {
      term *= q / (k * (k + nu + 1.0));
      sum += term;
      if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    return -sgn * std::pow(2.0 * M_PI, 0.5 * N) * std::pow(2.0, -nu - 1.0) * z * sum;
  }
  return -sgn * std::pow(2.0 * M_PI, 0.5 * N) * std::pow(z, -nu) * boost::math::cyl_bessel_j(nu + 1.0, z);
}

double hyp2f1(double a, double b, double c, double z) {
  check_params(a, b, c);
  if (!(z < 1.0)) throw DomainError("hyp2f1: argument must satisfy z < 1 " + params_text(a, b, c, z));
  if (z == 0.0) return 1.0;
  if (nonpositive_integer(a) || nonpositive_integer(b)) return series(a, b, c, z);
  if (std::abs(z) <= 0.5) return series(a, b, c, z);
  if (z > 0.5) return near_one(a, b, c, 1.0 - z);
  // z < -1/2: Pfaff map onto w = z/(z-1) in (1/3, 1).
  const double w = z / (z - 1.0);
  const double omw = 1.0 / (1.0 - z);
  if (nonpositive_integer(c - a) && !nonpositive_integer(c - b))
    return std::pow(1.0 - z, -b) * unit_interval(c - a, b, c, w, omw);
  return std::pow(1.0 - z, -a) * unit_interval(a, c - b, c, w, omw);
}

double hyp2f1(const HypParams& p) { return hyp2f1(p.a, p.b, p.c, p.z); }

double hyp2f1_complement(double a, double b, double c, double one_minus_z) {
  check_params(a, b, c);
  if (!(one_minus_z > 0.0))
    throw DomainError("hyp2f1: argument must satisfy z < 1 " + params_text(a, b, c, 1.0 - one_minus_z));
  if (one_minus_z >= 0.5) return hyp2f1(a, b, c, 1.0 - one_minus_z);
  if (nonpositive_integer(a) || nonpositive_integer(b)) return series(a, b, c, 1.0 - one_minus_z);
  return near_one(a, b, c, one_minus_z);
}

PfaffResult pfaff_transform(const HypParams& p) {
  check_params(p.a, p.b, p.c);
  if (!(p.z <= 0.0)) throw DomainError("pfaff_transform: expects z = -r^2 <= 0");
  const double r2 = -p.z;
  PfaffResult t;
  t.transformed = HypParams{p.c - p.a, p.b, p.c, r2 / (1.0 + r2)};
  t.prefactor = std::pow(1.0 + r2, -p.b);
  t.complement = 1.0 / (1.0 + r2);
  return t;
}

double pfaff_evaluate(const PfaffResult& t) {
  const HypParams& q = t.transformed;
  if (t.complement >= 0.5) return t.prefactor * hyp2f1(q);
  return t.prefactor * hyp2f1_complement(q.a, q.b, q.c, t.complement);
}

std::string to_string(Regime r) {
  switch (r) {
    case Regime::FINITE_LIMIT: return "FINITE_LIMIT";
    case Regime::LOG_DIVERGENT: return "LOG_DIVERGENT";
    case Regime::POWER_DIVERGENT: return "POWER_DIVERGENT";
  }
  return "?";
}

LimitClass limit_classify(double a, double b, double c) {
  if (!(c > 0.0)) throw ParameterError("limit_classify: requires c > 0");
  LimitClass lc;
  lc.exponent = c - a - b;
  if (std::abs(lc.exponent) <= kRegimeTieTolerance) {
    lc.regime = Regime::LOG_DIVERGENT;
    lc.constant = gamma_fn(a + b) / (gamma_fn(a) * gamma_fn(b));
  } else if (lc.exponent > 0.0) {
    lc.regime = Regime::FINITE_LIMIT;
    lc.constant = gamma_fn(c) * gamma_fn(lc.exponent) / (gamma_fn(c - a) * gamma_fn(c - b));
  } else {
    lc.regime = Regime::POWER_DIVERGENT;
    lc.constant = gamma_fn(c) * gamma_fn(-lc.exponent) / (gamma_fn(a) * gamma_fn(b));
  }
  return lc;
}

double regime_normalizer(const LimitClass& lc, double one_minus_z) {
  switch (lc.regime) {
    case Regime::FINITE_LIMIT: return 1.0;
    case Regime::LOG_DIVERGENT: return -std::log(one_minus_z);
    case Regime::POWER_DIVERGENT: return std::pow(one_minus_z, lc.exponent);
  }
  return 1.0;
}

}  // namespace fraccert
