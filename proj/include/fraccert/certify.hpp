#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fraccert/field.hpp"

namespace fraccert {

// Lower bound on the density:
//   K (1 + |x|^2)^{-alpha/2}                     (power model)
//   K (1 + |x|^2)^{-s} log(1 + |x|^2)            (log_correction)
// `rho` is the actual density; when empty the lower bound itself is used.
struct DensityModel {
  double K = 1.0;
  double alpha = 0.0;
  bool log_correction = false;
  std::function<double(const Point&)> rho;

  double lower_bound(double r, double s) const;
  double operator()(const Point& x, double s) const;
  void validate() const;
};

struct ProblemSpec {
  FracOrder fo;
  DensityModel density;
  double beta = 1.0;
  double p = 1.0;
  std::optional<double> T;   // parabolic horizon
  std::optional<double> c0;  // elliptic floor

  bool parabolic() const { return T.has_value(); }
  void validate() const;  // ConfigError-free: throws ParameterError
};

enum class CaseLabel { I, II, III, IV, NONE };
std::string to_string(CaseLabel c);

CaseLabel classify(const ProblemSpec& spec);

struct RegimeConstant {
  CaseLabel label = CaseLabel::NONE;
  double value = 0.0;        // C1, C2 or C3 (positive)
  double cross_check = 0.0;  // -(limit constant) of F(-s, beta/2+s; N/2; z) as z -> 1
  double rel_diff = 0.0;
};

// Throws ParameterError for cases I and NONE, PoleError on Gamma poles.
RegimeConstant regime_constant(const ProblemSpec& spec);

// Model of -(-Delta)^s psi at large r, divided by the calibrated constant:
//   II, IV: (1+r^2)^{-(s + beta/2)} or (1+r^2)^{-(s + N/2)};  III: (1+r^2)^{-(s+beta/2)} log(1+r^2)
double asymptotic_profile(const ProblemSpec& spec, double r);

// -(-Delta)^s psi(r): quadrature for r <= 1, calibrated closed form beyond.
double neg_flap_psi(const ProblemSpec& spec, double r);

// max_{r <= R} |(-Delta)^s psi(r)|
double m_eps_beta(const ProblemSpec& spec, double R);

// Largest deviation of -(-Delta)^s psi / (Cv g) from the regime constant on
// 64 radii in [R, 8R]; the asymptotic comparison holds when it is <= eps/2.
double asymptotic_deviation(const ProblemSpec& spec, double R);

// Doubling search from R = 2; throws RadiusError beyond R = 2^40.
double find_R_epsilon(const ProblemSpec& spec, double epsilon);

struct Thresholds {
  CaseLabel label = CaseLabel::NONE;
  double epsilon = 0.0;
  double R_epsilon = 0.0;
  double C = 0.0;       // regime constant
  double Cv = 0.0;      // calibrated closed-form constant
  double M = 0.0;       // M_{eps,beta}
  double outer = 0.0;   // lambda bound from the far region
  double inner = 0.0;   // lambda bound from the ball of radius R_eps
  double lambda_min = 0.0;
  double elliptic_min = 0.0;  // minimal p c0 K, = K lambda_min
};

// Throws RadiusError if the asymptotic comparison fails at R_epsilon with margin eps/2.
Thresholds lambda_threshold(const ProblemSpec& spec, double epsilon, double R_epsilon);

// epsilon = 0.1 C and R_epsilon by doubling search (case I: zero thresholds, R = 10).
Thresholds default_thresholds(const ProblemSpec& spec);

struct ResidualNode {
  double r = 0.0;
  double t = 0.0;
  double residual = 0.0;
  double scale = 0.0;  // local scale e^{-lambda t} psi(r)
};

struct CertificateReport {
  std::string kind;  // "parabolic" or "elliptic"
  CaseLabel case_label = CaseLabel::NONE;
  Thresholds thresholds;
  double parameter = 0.0;       // lambda, or p c0 K
  double grid_min_parameter = 0.0;  // smallest parameter for which the grid passes
  double margin = 1e-8;
  double worst_scaled = 0.0;    // max residual / scale (parabolic) or min (elliptic)
  double comparability_C = 0.0;
  std::vector<ResidualNode> nodes;
  std::vector<std::string> notes;
  bool pass = false;
};

// Default grid: r = 0 plus 39 radii log-spaced on [1e-2, 10 R_eps].
std::vector<double> default_radii(double R_epsilon);

CertificateReport verify_parabolic(const ProblemSpec& spec, double lambda, std::vector<double> radii = {},
                                   std::vector<double> times = {});
CertificateReport verify_elliptic(const ProblemSpec& spec, std::vector<double> radii = {});

struct GrowthReport {
  bool member = false;          // symbolic decision sigma < 2s - alpha
  double beta = 0.0;            // N + 2s - alpha
  std::vector<double> radii;
  std::vector<double> integrals;  // truncated integrals of (1+|x|^2)^{sigma/2} psi
  double last_ratio = 0.0;      // ratio of the last two increments
  bool scan_agrees = false;
};

GrowthReport growth_membership(double sigma, const ProblemSpec& spec);

}  // namespace fraccert
