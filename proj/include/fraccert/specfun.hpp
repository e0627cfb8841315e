#pragma once

#include <string>

namespace fraccert {

// Gamma function.  Throws PoleError at 0, -1, -2, ...
double gamma_fn(double x);

// 1/Gamma(x), zero at the poles.
double rgamma(double x);

double digamma_fn(double x);

// Surface area of the unit sphere S^{n-1} in R^n.
double sphere_area(int n);

// Integral of exp(i z w_1) over the unit sphere S^{N-1}:
//   (2 pi)^{N/2} z^{1-N/2} J_{N/2-1}(z), with its z-derivative.
double sphere_fourier(int N, double z);
double sphere_fourier_derivative(int N, double z);

struct HypParams {
  double a = 0.0;
  double b = 0.0;
  double c = 1.0;
  double z = 0.0;
};

// Real-axis Gauss hypergeometric function 2F1(a, b; c; z) for z < 1.
double hyp2f1(const HypParams& p);
double hyp2f1(double a, double b, double c, double z);

// Same function evaluated from the complement w = 1 - z > 0, which keeps
// full precision when z is within rounding of 1.
double hyp2f1_complement(double a, double b, double c, double one_minus_z);

struct PfaffResult {
  HypParams transformed;  // (c - a, b, c) at argument r^2 / (1 + r^2)
  double prefactor = 1.0;  // (1 + r^2)^{-b}
  double complement = 1.0;  // 1 - transformed.z = 1 / (1 + r^2)
};

// Pfaff map for z = -r^2 <= 0:
//   F(a, b; c; z) = (1 - z)^{-b} F(c - a, b; c; z / (z - 1)).
PfaffResult pfaff_transform(const HypParams& p);

// Evaluates the right-hand side of the Pfaff identity.
double pfaff_evaluate(const PfaffResult& t);

enum class Regime { FINITE_LIMIT, LOG_DIVERGENT, POWER_DIVERGENT };

std::string to_string(Regime r);

struct LimitClass {
  Regime regime = Regime::FINITE_LIMIT;
  double constant = 0.0;
  double exponent = 0.0;  // c - a - b
};

inline constexpr double kRegimeTieTolerance = 1e-12;

// Behaviour of F(a, b; c; z) as z -> 1-.
LimitClass limit_classify(double a, double b, double c);

// Normalizer of the regime at argument z (1 for FINITE_LIMIT,
// -log(1 - z) for LOG_DIVERGENT, (1 - z)^{c - a - b} for POWER_DIVERGENT),
// expressed through the complement w = 1 - z.
double regime_normalizer(const LimitClass& lc, double one_minus_z);

}  // namespace fraccert
