#pragma once

#include <string>
#include <utility>
#include <vector>

#include "fraccert/certify.hpp"
#include "fraccert/field.hpp"

namespace fraccert {

// Classical Riesz constant Gamma(N/2 - s) / (4^s pi^{N/2} Gamma(s)).
double riesz_constant(const FracOrder& fo);

struct RieszOptions {
  double tol = 1e-10;          // quadrature tolerance of the convolution
  int calibration_points = 41; // pv evaluation points on [-3a, 3a]
  double pv_tol = 1e-9;
};

struct RieszResult {
  ScalarField phi;              // k * (|.|^{2s-N} * F)
  FracOrder fo;
  double support = 0.0;         // a, with F = 0 outside [-a, a]
  double mass = 0.0;            // int F
  double k = 0.0;               // calibrated so that (-Delta)^s phi = F
  double k_classical = 0.0;
  double residual = 0.0;        // sup |(-Delta)^s phi - F| / sup F with k
  double residual_classical = 0.0;
  std::vector<double> nodes;    // calibration points
  std::vector<double> flap;     // (-Delta)^s phi at the nodes
  std::vector<std::pair<double, double>> far_field;  // (|x|, phi |x|^{N-2s} / (k int F))
  double C0 = 0.0;              // min and max of (phi + |phi'|)(1 + |x|^{N-2s})
  double C1 = 0.0;
  bool positive = false;
};

// phi = I_{2s} * F for a compactly supported F >= 0.  N = 1 only;
// DimensionError when N <= 2s or N > 1.
RieszResult riesz_potential(const ScalarField& F, const FracOrder& fo, RieszOptions opt = {});

struct Lemma42Report {
  double sigma = 0.0;
  double window_beta = 0.0;   // upper end of the admissible sigma window from beta
  double window_s = 0.0;      // upper end from s
  bool hypothesis_line = false;  // alpha < s and N > -2s + alpha
  bool body_condition = false;   // N - 2s + 2 alpha > 0
  std::vector<double> Rs;
  std::vector<double> sups;      // sup_x R^sigma [|phi (-Delta)^s g_R| + |B(phi, g_R)|] / (rho phi)
  std::vector<double> far_field; // sup_x R^sigma |(-Delta)^s g_R| (1 + |x|^{2s - sigma})
  double spread = 0.0;           // max / min of sups
  std::vector<std::string> notes;
  bool pass = false;
};

// ParameterError when sigma lies outside (0, min(beta - N + 2s - 2 alpha, 2s - 2 alpha))
// or the body condition fails.  Passes when the spread is <= 5.
Lemma42Report lemma42_check(const RieszResult& riesz, const DensityModel& density, double beta,
                            const std::vector<double>& Rs, double sigma);

}  // namespace fraccert
