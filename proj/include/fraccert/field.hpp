#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

namespace fraccert {

using Point = std::vector<double>;

double norm(const Point& x);

struct FracOrder {
  double s = 0.5;
  int N = 1;

  // Throws ParameterError unless 0 < s < 1 and N >= 1.
  void validate() const;
};

enum class DecayClass { COMPACT, POWER, BOUNDED };
enum class Smoothness { C0 = 0, C1 = 1, C2 = 2, CINF = 3 };

// Evaluable real field on R^N with declared decay and smoothness.
//
// Decay contract, used to bound quadrature tails:
//   COMPACT: u(y) = 0 for |y| >= support
//   POWER:   |u(y)| <= amplitude * (1 + |y|)^{-exponent}
//   BOUNDED: |u(y)| <= amplitude
// `sup` bounds |u| everywhere.
struct ScalarField {
  int dim = 1;
  std::function<double(const Point&)> eval;
  // Optional radial profile f with u(y) = f(|y|); enables the angular
  // reduction for any dimension.
  std::function<double(double)> radial;
  DecayClass decay = DecayClass::BOUNDED;
  double exponent = 0.0;
  double amplitude = 1.0;
  double support = 0.0;
  double sup = 1.0;
  Smoothness smoothness = Smoothness::CINF;
  std::string name;

  double operator()(const Point& x) const { return eval(x); }
  bool is_radial() const { return static_cast<bool>(radial); }

  static ScalarField from_radial(int dim, std::function<double(double)> f, DecayClass decay, double exponent,
                                 double amplitude, double support, double sup, std::string name);
  static ScalarField from_point(int dim, std::function<double(const Point&)> f, DecayClass decay, double exponent,
                                double amplitude, double support, double sup, std::string name);
};

// Common fields.
ScalarField gaussian_field(int dim, double width = 1.0);           // exp(-|x|^2 / width^2)
ScalarField weight_field(int dim, double beta);                    // psi = (1 + |x|^2)^{-beta/2}
ScalarField constant_field(int dim, double value);
ScalarField bump_field(int dim, double radius, double height = 1.0);  // C^inf compact bump
ScalarField translate(const ScalarField& u, const Point& h);        // u(. - h)
ScalarField scale_field(const ScalarField& u, double factor);

}  // namespace fraccert
