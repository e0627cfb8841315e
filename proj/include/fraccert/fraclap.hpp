#pragma once

#include <vector>

#include "fraccert/field.hpp"
#include "fraccert/grid.hpp"

namespace fraccert {

// C_{N,s} = 2^{2s-1} 2s Gamma((N+2s)/2) / (pi^{N/2} Gamma(1-s)).
double normalization_constant(const FracOrder& fo);

struct ValueError {
  double value = 0.0;
  double error = 0.0;
};

// (-Delta)^s exp(-|x|^2) = 4^s Gamma(N/2+s)/Gamma(N/2) 1F1(N/2+s; N/2; -r^2).
double gaussian_flap_closed_form(const FracOrder& fo, double r);

// C_{N,s} recomputed from (int (1 - cos xi_1) / |xi|^{N+2s} dxi)^{-1}.
ValueError normalization_constant_integral(const FracOrder& fo, double tol = 1e-12);

struct PvOptions {
  double delta = -1.0;       // inner radius; default 1e-2 (1 + |x|)
  double truncation = -1.0;  // outer radius; default max(50, 10 support, 2 (|x| + 1))
  double sphere_tol = 1e-14; // relative tolerance of angular integrals
};

// C_{N,s} P.V. int (u(x) - u(y)) / |x - y|^{N+2s} dy with error estimate.
ValueError flap_pv(const ScalarField& u, const Point& x, const FracOrder& fo, double tol = 1e-10,
                   PvOptions opt = {});

// B(f,g)(x) = C_{N,s} int (f(x) - f(y)) (g(x) - g(y)) / |x - y|^{N+2s} dy.
ValueError bilinear_form(const ScalarField& f, const ScalarField& g, const Point& x, const FracOrder& fo,
                         double tol = 1e-10, PvOptions opt = {});

// Hypergeometric shape of (-Delta)^s psi for psi = (1 + r^2)^{-beta/2}:
//   (-Delta)^s psi(r) = C F(N/2 + s, beta/2 + s; N/2; -r^2).
// C is calibrated by least squares against flap_pv on r in [2, 5] and
// validated at r in {8, 10, 15}.
class RadialClosedForm {
 public:
  RadialClosedForm(double beta, const FracOrder& fo, double tol = 1e-11);

  double beta() const { return beta_; }
  const FracOrder& order() const { return fo_; }
  double shape(double r) const;            // F(N/2+s, beta/2+s; N/2; -r^2) through Pfaff
  double flap(double r) const;             // C * shape(r)
  double neg_flap(double r) const { return -flap(r); }
  double constant() const { return constant_; }
  double classical_constant() const;       // 2^{2s} G(b/2+s) G(N/2+s) / (G(b/2) G(N/2))
  double calibration_residual() const { return residual_; }
  double validation_error() const { return validation_; }

 private:
  double beta_;
  FracOrder fo_;
  double constant_ = 0.0;
  double residual_ = 0.0;
  double validation_ = 0.0;
};

struct ClosedFormValue {
  double value = 0.0;     // -(-Delta)^s psi(r)
  double constant = 0.0;  // calibrated C
};

// Cached per (N, s, beta); r must exceed 1.
ClosedFormValue flap_radial_closed_form(double beta, const FracOrder& fo, double r);
const RadialClosedForm& radial_closed_form(double beta, const FracOrder& fo);

struct SupersolutionCriterion {
  bool holds = false;
  std::vector<double> radii;
  std::vector<double> lhs;  // psi'' + (N - 2s + 1)/r psi'
};

SupersolutionCriterion radial_supersolution_criterion(double beta, const FracOrder& fo);

// Smooth nonincreasing profile: 1 on [0, 1/2], 0 on [1, inf).
double cutoff_profile(double t);

struct CutoffFamily {
  double R = 1.0;
  double operator()(double r) const { return cutoff_profile(r / R); }
};

ScalarField cutoff_field(const CutoffFamily& cf, int dim);

ValueError cutoff_flap(const CutoffFamily& cf, const Point& x, const FracOrder& fo, double tol = 1e-12);

struct ConvexityPoint {
  Point x;
  double lhs = 0.0;
  double rhs = 0.0;
  double error = 0.0;
};

struct ConvexityReport {
  std::vector<ConvexityPoint> points;
  double max_violation = 0.0;  // max(lhs - rhs)
  bool pass = false;
};

// Checks (-Delta)^s [G(u)] <= G'(u) (-Delta)^s u with G(r) = (r^2 + alpha)^{p/2}.
ConvexityReport convexity_check(const ScalarField& u, double p_exp, double alpha_reg, const std::vector<Point>& points,
                                const FracOrder& fo, double tol = 1e-4);

}  // namespace fraccert
