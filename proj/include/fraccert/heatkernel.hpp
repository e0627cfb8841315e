#pragma once

#include <vector>

#include "fraccert/field.hpp"
#include "fraccert/grid.hpp"

namespace fraccert {

// PAPER_RAW keeps P(x) = int exp(i x.xi - |xi|^{2s}) dxi (mass (2 pi)^N);
// UNIT_MASS divides by (2 pi)^N.
enum class Normalization { PAPER_RAW, UNIT_MASS };

struct ProfileOptions {
  double x_max = 50.0;        // end of the tabulated range
  int nodes_per_decade = 200;
  double tol = 1e-13;         // absolute tolerance of each profile quadrature (raw scale)
};

// Radial profile P of the fractional heat kernel p(x,t) = t^{-N/2s} P(x t^{-1/2s}).
// Tabulated once on a log grid with monotone cubic Hermite interpolation;
// Taylor series from the moments below the grid, asymptotic series beyond it.
class KernelProfile {
 public:
  explicit KernelProfile(const FracOrder& fo, Normalization norm = Normalization::UNIT_MASS,
                         ProfileOptions opt = {});

  const FracOrder& order() const { return fo_; }
  Normalization normalization() const { return norm_; }
  double factor() const { return factor_; }

  double profile(double r) const;
  double profile_derivative(double r) const;
  double kernel(double r, double t) const;

  // Direct oscillatory quadrature, bypassing the table.
  double quadrature(double r) const;
  double quadrature_derivative(double r) const;
  double taylor(double r) const;
  double asymptotic(double r) const;

  double mass() const { return mass_; }
  double x_min() const { return x_.front(); }
  double x_max() const { return x_.back(); }
  double edge_mismatch() const { return edge_mismatch_; }
  int asymptotic_terms(double r) const;

  // int_{|y| > d} p(y, t) dy
  double tail_mass(double d, double t) const;

 private:
  double raw_taylor(double r) const;
  double raw_taylor_derivative(double r) const;
  double raw_asymptotic(double r, bool derivative) const;
  double raw_tail_mass(double X) const;

  FracOrder fo_;
  Normalization norm_;
  ProfileOptions opt_;
  double factor_ = 1.0;
  std::vector<double> moments_;   // M_{2k} / (4^k k! (N/2)_k), alternating sign applied at use
  std::vector<double> asym_;      // coefficients of r^{-2sk-N}, k = 1..
  std::vector<double> x_, p_, d_;
  double mass_ = 0.0;
  double edge_mismatch_ = 0.0;
};

double profile_eval(const KernelProfile& kp, const Point& x);
double kernel_eval(const KernelProfile& kp, const Point& x, double t);

struct BoundReport {
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  double spread = 0.0;     // max / min
  double C = 0.0;          // max(max, 1/min)
  double spread_limit = 100.0;
  bool pass = false;
};

// Ratio p(x,t) / min{t^{-N/2s}, t / |x|^{N+2s}} over the product grid.
BoundReport bound_check(const KernelProfile& kp, const std::vector<double>& xs, const std::vector<double>& ts,
                        double spread_limit = 100.0);

enum class BoundaryMode { PERIODIC, FREE_SPACE };

struct ConvolutionOptions {
  BoundaryMode mode = BoundaryMode::FREE_SPACE;
  double max_tail_mass = 1e-6;  // FREE_SPACE: kernel mass allowed to leave the box
  int images = 64;              // PERIODIC: explicit periodic images per side
};

// u(., t) = p(., t) * u0 on a one-dimensional grid.  UNIT_MASS required.
GridField convolution_solution(const GridField& u0, double t, const KernelProfile& kp, ConvolutionOptions opt = {});

}  // namespace fraccert
