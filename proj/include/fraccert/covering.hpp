#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fraccert/field.hpp"

namespace fraccert {

enum class Region { A1, A2, A3, A4, A5, C };
std::string to_string(Region r);

// All regions of the covering of R^N x R^N at scale R that contain (x, y).
std::vector<Region> region_membership(const Point& x, const Point& y, double R);

struct RemainderOptions {
  double tau = 1.0;          // length of the time interval (u is stationary)
  double tol = 1e-6;         // relative tolerance of the nested quadrature (N = 1)
  long mc_samples = 1000000; // Monte Carlo samples per region (N >= 2)
  std::uint64_t seed = 12345;
  bool cutoff_term = true;   // also compute int |u| phi |(-Delta)^s gamma_R|
};

struct RegionValue {
  Region region = Region::A1;
  double value = 0.0;
  double error = 0.0;   // quadrature estimate or Monte Carlo standard error
  double shell = 0.0;   // weighted u-mass on the shell carried by the region's bound
};

struct RemainderReport {
  double R = 0.0;
  std::array<RegionValue, 5> regions;
  double sum_regions = 0.0;
  double total = 0.0;          // I(R) computed directly (N = 1) or as the region sum (N >= 2)
  double total_error = 0.0;
  double cutoff_term = 0.0;    // int |u| phi |(-Delta)^s gamma_R| dx
  double weighted_norm = 0.0;  // ||u||_{L^1_psi}
  bool monte_carlo = false;
};

// I^{A_k}(R) = tau C_{N,s} int_{A_k} |u(x)| |phi(x) - phi(y)| |gamma_R(x) - gamma_R(y)| / |x - y|^{N+2s}.
// `beta` is the exponent of the weight psi used by the shell normalisers.
// u and phi must be radial.
RemainderReport remainder_integral(const ScalarField& u, const ScalarField& phi, double R, const FracOrder& fo,
                                   double beta, RemainderOptions opt = {});

struct DecayFit {
  double exponent = 0.0;
  double intercept = 0.0;
  double max_residual = 0.0;  // in log space
};

// Least-squares slope of log I against log R; DegenerateFitError for fewer
// than 4 scales or nonpositive / non-finite values.
DecayFit decay_rate_fit(const std::vector<std::pair<double, double>>& values);

struct CoveringScan {
  FracOrder fo;
  std::vector<RemainderReport> reports;
  std::array<DecayFit, 5> raw_fits;
  std::array<DecayFit, 5> shell_fits;  // fits of I^{A_k} / shell_k
  DecayFit total_fit;
  bool monotone = false;
  double final_over_initial = 0.0;
};

CoveringScan covering_scan(const ScalarField& u, const ScalarField& phi, const std::vector<double>& Rs,
                           const FracOrder& fo, double beta, RemainderOptions opt = {});

}  // namespace fraccert
