#include "fraccert/certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "fraccert/errors.hpp"
#include "fraccert/fraclap.hpp"
#include "fraccert/quadrature.hpp"
#include "fraccert/specfun.hpp"

namespace fraccert {

namespace {

constexpr double kBoundaryTol = 1e-12;

Point axis_point(int N, double r) {
  Point x(N, 0.0);
  x[0] = r;
  return x;
}

double psi(double beta, double r) { return std::pow(1.0 + r * r, -0.5 * beta); }

}  // namespace

double DensityModel::lower_bound(double r, double s) const {
  const double u = 1.0 + r * r;
  if (log_correction) return K * std::pow(u, -s) * std::log(u);
  return K * std::pow(u, -0.5 * alpha);
}

double DensityModel::operator()(const Point& x, double s) const {
  if (rho) return rho(x);
  return lower_bound(norm(x), s);
}

void DensityModel::validate() const {
  if (!(K > 0.0) || !std::isfinite(K)) throw ParameterError("density constant K must be positive");
  if (!std::isfinite(alpha)) throw ParameterError("density exponent alpha must be finite");
}

void ProblemSpec::validate() const {
  fo.validate();
  density.validate();
  if (!(beta > 0.0) || !std::isfinite(beta)) throw ParameterError("weight exponent beta must be positive");
  if (!(p >= 1.0)) throw ParameterError("Lebesgue exponent p must be >= 1");
  if (T.has_value() == c0.has_value()) throw ParameterError("exactly one of T (parabolic) and c0 (elliptic) must be set");
  if (T && !(*T > 0.0)) throw ParameterError("horizon T must be positive");
  if (c0 && !(*c0 > 0.0)) throw ParameterError("elliptic floor c0 must be positive");
}

std::string to_string(CaseLabel c) {
  switch (c) {
    case CaseLabel::I: return "I";
    case CaseLabel::II: return "II";
    case CaseLabel::III: return "III";
    case CaseLabel::IV: return "IV";
    case CaseLabel::NONE: return "NONE";
  }
  return "NONE";
}

CaseLabel classify(const ProblemSpec& spec) {
  const double N = spec.fo.N;
  const double s = spec.fo.s;
  const double a = spec.density.alpha;
  const double b = spec.beta;
  if (b <= 0.0) return CaseLabel::NONE;
  if (b <= N - 2.0 * s + kBoundaryTol) return CaseLabel::I;
  if (std::abs(b - N) <= kBoundaryTol) {
    if (spec.density.log_correction || a < 2.0 * s) return CaseLabel::III;
    return CaseLabel::NONE;
  }
  if (b < N) return a <= 2.0 * s + kBoundaryTol ? CaseLabel::II : CaseLabel::NONE;
  return a + b <= 2.0 * s + N + kBoundaryTol ? CaseLabel::IV : CaseLabel::NONE;
}

RegimeConstant regime_constant(const ProblemSpec& spec) {
  const double N = spec.fo.N;
  const double s = spec.fo.s;
  const double b = spec.beta;
  RegimeConstant rc;
  rc.label = classify(spec);
  switch (rc.label) {
    case CaseLabel::II:
      rc.value = -gamma_fn(N / 2) * gamma_fn((N - b) / 2) / (gamma_fn(N / 2 + s) * gamma_fn((N - b) / 2 - s));
      break;
    case CaseLabel::III:
      rc.value = -gamma_fn(b / 2) / (gamma_fn(-s) * gamma_fn(b / 2 + s));
      break;
    case CaseLabel::IV:
      rc.value = -gamma_fn(N / 2) * gamma_fn((b - N) / 2) / (gamma_fn(-s) * gamma_fn(b / 2 + s));
      break;
    default:
      throw ParameterError("regime constant is defined for cases II, III and IV only");
  }
  // Pfaff-transformed parameters (c - a, b, c) = (-s, beta/2 + s, N/2).
  LimitClass lc = limit_classify(-s, b / 2 + s, N / 2);
  rc.cross_check = -lc.constant;
  rc.rel_diff = std::abs(rc.cross_check - rc.value) / std::abs(rc.value);
  return rc;
}

double asymptotic_profile(const ProblemSpec& spec, double r) {
  const double s = spec.fo.s;
  const double u = 1.0 + r * r;
  switch (classify(spec)) {
    case CaseLabel::II: return std::pow(u, -(s + spec.beta / 2));
    case CaseLabel::III: return std::pow(u, -(s + spec.beta / 2)) * std::log(u);
    case CaseLabel::IV: return std::pow(u, -(s + spec.fo.N / 2.0));
    default: throw ParameterError("asymptotic profile is defined for cases II, III and IV only");
  }
}

double neg_flap_psi(const ProblemSpec& spec, double r) {
  r = std::abs(r);
  if (r > 1.0) return flap_radial_closed_form(spec.beta, spec.fo, r).value;
  const ScalarField u = weight_field(spec.fo.N, spec.beta);
  return -flap_pv(u, axis_point(spec.fo.N, r), spec.fo, 1e-11).value;
}

double m_eps_beta(const ProblemSpec& spec, double R) {
  double m = 0.0;
  for (int i = 0; i <= 20; ++i) m = std::max(m, std::abs(neg_flap_psi(spec, i / 20.0)));
  if (R > 1.0) {
    const int n = 400;
    for (int i = 1; i <= n; ++i) {
      const double r = std::pow(R, static_cast<double>(i) / n);
      m = std::max(m, std::abs(neg_flap_psi(spec, r)));
    }
  }
  return m;
}

double asymptotic_deviation(const ProblemSpec& spec, double R) {
  const RegimeConstant rc = regime_constant(spec);
  const double Cv = radial_closed_form(spec.beta, spec.fo).constant();
  double dev = 0.0;
  for (int i = 0; i < 64; ++i) {
    const double r = R * std::pow(8.0, i / 63.0);
    const double ratio = neg_flap_psi(spec, r) / (Cv * asymptotic_profile(spec, r));
    dev = std::max(dev, std::abs(ratio - rc.value));
  }
  return dev;
}

double find_R_epsilon(const ProblemSpec& spec, double epsilon) {
  for (double R = 2.0; R <= std::ldexp(1.0, 40); R *= 2.0)
    if (asymptotic_deviation(spec, R) <= 0.5 * epsilon) return R;
  std::ostringstream os;
  os << "no R_epsilon up to 2^40 satisfies the asymptotic comparison with epsilon=" << epsilon;
  throw RadiusError(os.str());
}

Thresholds lambda_threshold(const ProblemSpec& spec, double epsilon, double R_epsilon) {
  spec.validate();
  Thresholds th;
  th.label = classify(spec);
  th.epsilon = epsilon;
  th.R_epsilon = R_epsilon;
  if (th.label == CaseLabel::NONE) throw ParameterError("parameters fall in no admissible case");
  if (th.label == CaseLabel::I) return th;
  if (!(epsilon > 0.0)) throw ParameterError("epsilon must be positive");
  if (!(R_epsilon > 1.0)) throw ParameterError("R_epsilon must exceed 1");

  const double s = spec.fo.s;
  const double K = spec.density.K;
  const double a = spec.density.alpha;
  th.C = regime_constant(spec).value;
  th.Cv = radial_closed_form(spec.beta, spec.fo).constant();
  const double dev = asymptotic_deviation(spec, R_epsilon);
  if (dev > 0.5 * epsilon) {
    std::ostringstream os;
    os << "R_epsilon=" << R_epsilon << " too small: asymptotic deviation " << dev << " exceeds epsilon/2=" << 0.5 * epsilon;
    throw RadiusError(os.str());
  }
  th.M = m_eps_beta(spec, R_epsilon);
  const double u = 1.0 + R_epsilon * R_epsilon;
  const double inner_power = th.M * std::max(1.0, std::pow(u, 0.5 * (a + spec.beta))) / K;
  th.outer = (th.C + epsilon) * th.Cv / K;
  if (th.label == CaseLabel::III && spec.density.log_correction) {
    th.inner = 1.0 / (K * s * std::exp(1.0));
  } else if (th.label == CaseLabel::III) {
    // sup over r >= R of (1+r^2)^{alpha/2 - s} log(1+r^2)
    const double g = s - 0.5 * a;
    const double sup = u >= std::exp(1.0 / g) ? std::pow(u, -g) * std::log(u) : 1.0 / (g * std::exp(1.0));
    th.outer *= sup;
    th.inner = inner_power;
  } else {
    th.inner = inner_power;
  }
  th.lambda_min = std::max(th.outer, th.inner);
  th.elliptic_min = K * th.lambda_min;
  return th;
}

Thresholds default_thresholds(const ProblemSpec& spec) {
  spec.validate();
  const CaseLabel label = classify(spec);
  if (label == CaseLabel::I) {
    Thresholds th;
    th.label = label;
    th.R_epsilon = 10.0;
    return th;
  }
  if (label == CaseLabel::NONE) throw ParameterError("parameters fall in no admissible case");
  const double eps = 0.1 * regime_constant(spec).value;
  return lambda_threshold(spec, eps, find_R_epsilon(spec, eps));
}

std::vector<double> default_radii(double R_epsilon) {
  std::vector<double> r{0.0};
  const double hi = 10.0 * R_epsilon;
  for (int i = 0; i < 39; ++i) r.push_back(1e-2 * std::pow(hi / 1e-2, i / 38.0));
  return r;
}

CertificateReport verify_parabolic(const ProblemSpec& spec, double lambda, std::vector<double> radii,
                                   std::vector<double> times) {
  spec.validate();
  if (!spec.parabolic()) throw ParameterError("verify_parabolic needs a parabolic horizon T");
  CertificateReport rep;
  rep.kind = "parabolic";
  rep.case_label = classify(spec);
  rep.parameter = lambda;
  if (rep.case_label == CaseLabel::NONE) {
    rep.notes.push_back("parameters fall in no admissible case");
    return rep;
  }
  rep.thresholds = default_thresholds(spec);
  if (radii.empty()) radii = default_radii(rep.thresholds.R_epsilon);
  if (times.empty()) times = {0.0, 0.5 * *spec.T, *spec.T};
  if (!(lambda > 0.0)) rep.notes.push_back("lambda must be positive for a strict inequality");

  const double s = spec.fo.s;
  bool all = true;
  rep.worst_scaled = -std::numeric_limits<double>::infinity();
  for (double r : radii) {
    const double nf = neg_flap_psi(spec, r);
    const double w = psi(spec.beta, r);
    const double rho = spec.density(axis_point(spec.fo.N, r), s);
    if (nf > 0.0) rep.grid_min_parameter = std::max(rep.grid_min_parameter, nf / (rho * w));
    const double comp = 1.0 + spec.beta * r / (1.0 + r * r);  // (psi + |grad psi|) / psi
    rep.comparability_C = std::max(rep.comparability_C, comp);
    for (double t : times) {
      const double e = std::exp(-lambda * t);
      ResidualNode node{r, t, e * (nf - lambda * rho * w), e * w};
      rep.worst_scaled = std::max(rep.worst_scaled, node.residual / node.scale);
      if (!(node.residual <= -rep.margin * node.scale)) all = false;
      rep.nodes.push_back(node);
    }
  }
  if (rep.comparability_C > 1.0 + 0.5 * spec.beta + 1e-12) {
    all = false;
    rep.notes.push_back("weight comparability constant exceeds 1 + beta/2");
  }
  if (!std::isfinite(rep.thresholds.lambda_min)) all = false;
  rep.pass = all && lambda > 0.0;
  return rep;
}

CertificateReport verify_elliptic(const ProblemSpec& spec, std::vector<double> radii) {
  spec.validate();
  if (spec.parabolic()) throw ParameterError("verify_elliptic needs an elliptic floor c0");
  CertificateReport rep;
  rep.kind = "elliptic";
  rep.case_label = classify(spec);
  rep.parameter = spec.p * *spec.c0 * spec.density.K;
  if (rep.case_label == CaseLabel::NONE) {
    rep.notes.push_back("parameters fall in no admissible case");
    return rep;
  }
  rep.thresholds = default_thresholds(spec);
  if (radii.empty()) radii = default_radii(rep.thresholds.R_epsilon);

  const double s = spec.fo.s;
  const double K = spec.density.K;
  bool all = true;
  rep.worst_scaled = std::numeric_limits<double>::infinity();
  for (double r : radii) {
    const double nf = neg_flap_psi(spec, r);
    const double w = psi(spec.beta, r);
    const double shape = spec.density.lower_bound(r, s) / K;  // rho c >= K shape c0
    if (nf > 0.0) {
      const double need = shape > 0.0 ? nf / (shape * w) : std::numeric_limits<double>::infinity();
      rep.grid_min_parameter = std::max(rep.grid_min_parameter, need);
    }
    // (-Delta)^s zeta + p rho c zeta with rho c at its lower bound
    ResidualNode node{r, 0.0, -nf + rep.parameter * shape * w, w};
    rep.worst_scaled = std::min(rep.worst_scaled, node.residual / node.scale);
    if (!(node.residual >= rep.margin * node.scale)) all = false;
    rep.nodes.push_back(node);
    rep.comparability_C = std::max(rep.comparability_C, 1.0 + spec.beta * r / (1.0 + r * r));
  }
  if (rep.parameter <= rep.thresholds.elliptic_min)
    rep.notes.push_back("p c0 K does not exceed the analytic threshold");
  rep.pass = all && std::isfinite(rep.thresholds.elliptic_min);
  return rep;
}

GrowthReport growth_membership(double sigma, const ProblemSpec& spec) {
  const double s = spec.fo.s;
  const double a = spec.density.alpha;
  const int N = spec.fo.N;
  if (!(a < 2.0 * s)) throw ParameterError("growth membership requires alpha < 2s");
  GrowthReport rep;
  rep.beta = N + 2.0 * s - a;
  rep.member = sigma < 2.0 * s - a - kBoundaryTol;
  const double e = 0.5 * (sigma - rep.beta);
  auto f = [&](double r) { return std::pow(r, N - 1) * std::pow(1.0 + r * r, e); };
  const double area = sphere_area(N);
  double acc = 0.0;
  double lo = 0.0;
  for (int k = 1; k <= 8; ++k) {
    const double hi = std::pow(10.0, k);
    acc += area * quad::adaptive(f, lo, hi, {1e-14, 1e-12}).value;
    rep.radii.push_back(hi);
    rep.integrals.push_back(acc);
    lo = hi;
  }
  const size_t n = rep.integrals.size();
  const double d1 = rep.integrals[n - 1] - rep.integrals[n - 2];
  const double d0 = rep.integrals[n - 2] - rep.integrals[n - 3];
  rep.last_ratio = d1 / d0;
  rep.scan_agrees = (rep.last_ratio < 0.99) == rep.member;
  return rep;
}

}  // namespace fraccert
