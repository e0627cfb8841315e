#include <gtest/gtest.h>

#include <cmath>

#include "fraccert/errors.hpp"
#include "fraccert/fraclap.hpp"

using namespace fraccert;

TEST(NormalizationConstant, FrozenValues) {
  EXPECT_NEAR(normalization_constant({0.5, 1}), 1.0 / M_PI, 1e-14);
  EXPECT_NEAR(normalization_constant({0.25, 1}), 0.199471140200716339, 1e-14);
  EXPECT_NEAR(normalization_constant({0.5, 3}), 0.101321183642337771, 1e-14);
  EXPECT_NEAR(normalization_constant({0.75, 2}), 0.171167129690552343, 1e-14);
}

TEST(NormalizationConstant, IntegralAgrees) {
  for (double s : {0.25, 0.5, 0.75}) {
    const FracOrder fo{s, 1};
    EXPECT_NEAR(normalization_constant_integral(fo).value / normalization_constant(fo), 1.0, 1e-8) << s;
  }
}

TEST(GaussianClosedForm, FrozenValues) {
  EXPECT_NEAR(gaussian_flap_closed_form({0.25, 1}, 1.0), 0.121932432383057, 1e-12);
  EXPECT_NEAR(gaussian_flap_closed_form({0.5, 1}, 0.0), 1.12837916709551, 1e-12);
  EXPECT_NEAR(gaussian_flap_closed_form({0.75, 1}, 1.0), -0.345726954203371, 1e-12);
  EXPECT_NEAR(gaussian_flap_closed_form({0.75, 2}, 0.0), 2.59950138027716, 1e-12);
  EXPECT_NEAR(gaussian_flap_closed_form({0.5, 3}, 1.0), 0.521221461254119, 1e-12);
}

TEST(FlapPv, GaussianMatchesClosedForm) {
  for (int N : {1, 2, 3}) {
    const FracOrder fo{0.5, N};
    const ScalarField u = gaussian_field(N);
    Point x(N, 0.0);
    x[0] = 1.0;
    EXPECT_NEAR(flap_pv(u, x, fo, 1e-10).value, gaussian_flap_closed_form(fo, 1.0), 1e-7) << N;
  }
}

TEST(FlapPv, WeightClosedFormFrozen) {
  // (-Delta)^s psi from the hypergeometric representation, mpmath
  struct Case {
    int N;
    double s, beta, r, value;
  };
  const Case cases[] = {{1, 0.5, 1.0, 0.0, 0.636619772367581343},
                        {1, 0.5, 1.0, 2.0, -0.0370801507393693362},
                        {1, 0.25, 0.5, 3.0, 0.0849997636798840503},
                        {2, 0.75, 1.0, 1.5, 0.0766253369492876768}};
  for (const auto& c : cases) {
    const ScalarField psi = weight_field(c.N, c.beta);
    Point x(c.N, 0.0);
    x[0] = c.r;
    EXPECT_NEAR(flap_pv(psi, x, {c.s, c.N}, 1e-10).value, c.value, 2e-7) << c.N << " " << c.s << " " << c.r;
  }
}

TEST(RadialClosedForm, CalibrationMatchesClassicalConstant) {
  const RadialClosedForm cf(1.0, {0.5, 1});
  EXPECT_NEAR(cf.constant() / cf.classical_constant(), 1.0, 1e-6);
  EXPECT_NEAR(cf.flap(3.0) / flap_pv(weight_field(1, 1.0), Point{3.0}, {0.5, 1}).value, 1.0, 1e-6);
}

TEST(FlapPv, RejectsRoughField) {
  ScalarField u = gaussian_field(1);
  u.smoothness = Smoothness::C0;
  EXPECT_THROW(flap_pv(u, Point{0.0}, {0.5, 1}), SingularityError);
}

TEST(FlapPv, RejectsBadOrder) {
  EXPECT_THROW(flap_pv(gaussian_field(1), Point{0.0}, {1.0, 1}), ParameterError);
}

TEST(Cutoff, ProfileAndScaling) {
  EXPECT_EQ(cutoff_profile(0.3), 1.0);
  EXPECT_EQ(cutoff_profile(1.2), 0.0);
  const FracOrder fo{0.5, 1};
  const double base = cutoff_flap({1.0}, Point{0.7}, fo).value;
  for (double R : {2.0, 8.0}) {
    const double v = cutoff_flap({R}, Point{0.7 * R}, fo).value;
    EXPECT_NEAR(v * std::pow(R, 2.0 * fo.s), base, 1e-8 * std::abs(base) + 1e-10) << R;
  }
}

TEST(Bilinear, ProductRule) {
  // (-Delta)^s (fg) = f (-Delta)^s g + g (-Delta)^s f - B(f, g)
  const FracOrder fo{0.5, 1};
  const ScalarField f = gaussian_field(1);
  const ScalarField g = weight_field(1, 1.0);
  const ScalarField fg = ScalarField::from_radial(
      1, [](double r) { return std::exp(-r * r) / std::sqrt(1 + r * r); }, DecayClass::POWER, 3.0, 1.0, 0.0, 1.0, "fg");
  const Point x{0.8};
  const double lhs = flap_pv(fg, x, fo).value;
  const double rhs = f(x) * flap_pv(g, x, fo).value + g(x) * flap_pv(f, x, fo).value - bilinear_form(f, g, x, fo).value;
  EXPECT_NEAR(lhs, rhs, 1e-7);
}

TEST(Supersolution, CriterionSign) {
  EXPECT_TRUE(radial_supersolution_criterion(1.0, {0.5, 3}).holds);
  EXPECT_FALSE(radial_supersolution_criterion(2.5, {0.5, 3}).holds);
  const auto c = radial_supersolution_criterion(1.0, {0.5, 3});
  for (double v : c.lhs) EXPECT_LE(v, 1e-14);
}

TEST(Convexity, GaussianPasses) {
  std::vector<Point> pts{{0.0}, {0.5}, {2.0}};
  const ConvexityReport r = convexity_check(gaussian_field(1), 2.0, 0.01, pts, {0.5, 1});
  EXPECT_TRUE(r.pass);
  EXPECT_LE(r.max_violation, 1e-4);
}
