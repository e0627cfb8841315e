#include "fraccert/field.hpp"

#include <cmath>
#include <sstream>

#include "fraccert/errors.hpp"

namespace fraccert {

double norm(const Point& x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

void FracOrder::validate() const {
  if (!(s > 0.0 && s < 1.0)) {
    std::ostringstream os;
    os << "fractional order s must lie in (0,1), got " << s;
    throw ParameterError(os.str());
  }
  if (N < 1) throw ParameterError("dimension N must be >= 1");
}

ScalarField ScalarField::from_radial(int dim, std::function<double(double)> f, DecayClass decay, double exponent,
                                     double amplitude, double support, double sup, std::string name) {
  ScalarField u;
  u.dim = dim;
  u.radial = f;
  u.eval = [f](const Point& x) { return f(norm(x)); };
  u.decay = decay;
  u.exponent = exponent;
  u.amplitude = amplitude;
  u.support = support;
  u.sup = sup;
  u.name = std::move(name);
  return u;
}

ScalarField ScalarField::from_point(int dim, std::function<double(const Point&)> f, DecayClass decay,
                                    double exponent, double amplitude, double support, double sup,
                                    std::string name) {
  ScalarField u;
  u.dim = dim;
  u.eval = std::move(f);
  u.decay = decay;
  u.exponent = exponent;
  u.amplitude = amplitude;
  u.support = support;
  u.sup = sup;
  u.name = std::move(name);
  return u;
}

ScalarField gaussian_field(int dim, double width) {
  // exp(-r^2/w^2) <= A (1+r)^{-p} with p = 12 and A = max_r (1+r)^12 exp(-r^2/w^2).
  const double p = 12.0;
  const double rstar = 0.5 * (-1.0 + std::sqrt(1.0 + 2.0 * p * width * width));
  const double amp = std::pow(1.0 + rstar, p) * std::exp(-rstar * rstar / (width * width)) * 1.01;
  return ScalarField::from_radial(
      dim, [width](double r) { return std::exp(-r * r / (width * width)); }, DecayClass::POWER, p, amp, 0.0, 1.0,
      "gaussian");
}

ScalarField weight_field(int dim, double beta) {
  // (1+r^2)^{-b/2} <= 2^{b/2} (1+r)^{-b}
  return ScalarField::from_radial(
      dim, [beta](double r) { return std::pow(1.0 + r * r, -0.5 * beta); }, DecayClass::POWER, beta,
      std::pow(2.0, 0.5 * beta), 0.0, 1.0, "psi");
}

ScalarField constant_field(int dim, double value) {
  return ScalarField::from_radial(
      dim, [value](double) { return value; }, DecayClass::BOUNDED, 0.0, std::abs(value), 0.0, std::abs(value),
      "constant");
}

ScalarField bump_field(int dim, double radius, double height) {
  return ScalarField::from_radial(
      dim,
      [radius, height](double r) {
        const double t = r / radius;
        if (t >= 1.0) return 0.0;
        return height * std::exp(1.0 - 1.0 / (1.0 - t * t));
      },
      DecayClass::COMPACT, 0.0, height, radius, height, "bump");
}

ScalarField translate(const ScalarField& u, const Point& h) {
  ScalarField v = u;
  v.radial = nullptr;
  auto f = u.eval;
  v.eval = [f, h](const Point& x) {
    Point y = x;
    for (size_t i = 0; i < y.size(); ++i) y[i] -= h[i];
    return f(y);
  };
  const double shift = norm(h);
  if (u.decay == DecayClass::COMPACT) v.support = u.support + shift;
  if (u.decay == DecayClass::POWER) v.amplitude = u.amplitude * std::pow(1.0 + shift, u.exponent);
  v.name = u.name + "_shifted";
  return v;
}

ScalarField scale_field(const ScalarField& u, double factor) {
  ScalarField v = u;
  auto f = u.eval;
  v.eval = [f, factor](const Point& x) { return factor * f(x); };
  if (u.radial) {
    auto g = u.radial;
    v.radial = [g, factor](double r) { return factor * g(r); };
  }
  v.amplitude = std::abs(factor) * u.amplitude;
  v.sup = std::abs(factor) * u.sup;
  return v;
}

}  // namespace fraccert
