#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "fraccert/covering.hpp"
#include "fraccert/errors.hpp"
#include "fraccert/fraclap.hpp"
#include "fraccert/riesz.hpp"

using namespace fraccert;

namespace {

bool has(const std::vector<Region>& v, Region r) { return std::find(v.begin(), v.end(), r) != v.end(); }

ScalarField decaying(int N, double beta) {
  return ScalarField::from_radial(
      N, [beta, N](double r) { return std::pow(1.0 + r * r, -0.5 * (beta + N)); }, DecayClass::POWER, beta + N,
      std::pow(2.0, 0.5 * (beta + N)), 0.0, 1.0, "u");
}

}  // namespace

TEST(Regions, Examples) {
  EXPECT_TRUE(has(region_membership({8.0}, {0.5}, 8.0), Region::A1));
  EXPECT_TRUE(has(region_membership({1.0}, {1.0}, 8.0), Region::C));
  EXPECT_TRUE(has(region_membership({0.5}, {8.0}, 8.0), Region::A2));
  EXPECT_TRUE(has(region_membership({20.0}, {3.0}, 8.0), Region::A3));
  EXPECT_TRUE(has(region_membership({3.0}, {20.0}, 8.0), Region::A4));
  EXPECT_TRUE(has(region_membership({3.0}, {12.0}, 8.0), Region::A5));
}

TEST(Regions, CoveringIsComplete) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(-6.0, 6.0);
  for (double R : {1.0, 8.0, 64.0}) {
    for (int i = 0; i < 100000; ++i) {
      const Point x{std::exp(U(rng)) * (U(rng) < 0 ? -1 : 1), std::exp(U(rng))};
      const Point y{std::exp(U(rng)), -std::exp(U(rng))};
      ASSERT_FALSE(region_membership(x, y, R).empty());
    }
  }
}

TEST(Regions, CutoffConstantOnC) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  const double R = 8.0;
  const CutoffFamily g{R};
  for (int i = 0; i < 10000; ++i) {
    const double x = 200.0 * U(rng);
    const double y = 200.0 * U(rng);
    if (has(region_membership({x}, {y}, R), Region::C)) ASSERT_EQ(g(x), g(y));
  }
}

TEST(DecayFit, ExactPowerData) {
  std::vector<std::pair<double, double>> v;
  for (double R : {4.0, 8.0, 16.0, 32.0}) v.emplace_back(R, 3.0 / R);
  EXPECT_NEAR(decay_rate_fit(v).exponent, -1.0, 1e-12);
  v.pop_back();
  EXPECT_THROW(decay_rate_fit(v), DegenerateFitError);
}

TEST(Remainder, SplitMatchesDirectTotal) {
  const ScalarField u = decaying(1, 1.0);
  const RemainderReport r = remainder_integral(u, weight_field(1, 1.0), 8.0, {0.5, 1}, 1.0);
  EXPECT_NEAR(r.sum_regions, r.total, 1e-6 * r.total);
  EXPECT_GE(r.sum_regions, r.total - 1e-6 * r.total);
  EXPECT_NEAR(r.weighted_norm, 2.0, 1e-8);
}

TEST(Remainder, ScanDecaysForHalfOrder) {
  const ScalarField u = decaying(1, 1.0);
  const CoveringScan sc = covering_scan(u, weight_field(1, 1.0), {4, 8, 16, 32, 64}, {0.5, 1}, 1.0);
  EXPECT_TRUE(sc.monotone);
  EXPECT_NEAR(sc.shell_fits[1].exponent, -1.0, 0.3);
  EXPECT_LE(sc.shell_fits[4].exponent, 0.0 + 0.3);
  for (const auto& rep : sc.reports) {
    // cutoff term bounded by C R^{-2s} ||u||
    EXPECT_LE(rep.cutoff_term * rep.R, 4.0 * rep.weighted_norm);
  }
}

TEST(Riesz, BumpInversion) {
  const RieszResult r = riesz_potential(bump_field(1, 1.0), {0.25, 1});
  EXPECT_LE(r.residual, 1e-3);
  EXPECT_NEAR(r.k, riesz_constant({0.25, 1}), 1e-6);
  EXPECT_NEAR(riesz_constant({0.25, 1}), 0.398942280401432678, 1e-14);
  EXPECT_NEAR(riesz_constant({0.5, 3}), 0.0506605918211688857, 1e-14);
  EXPECT_TRUE(r.positive);
  EXPECT_GT(r.C0, 0.0);
  EXPECT_TRUE(std::isfinite(r.C1));
  for (const auto& [x, v] : r.far_field) EXPECT_NEAR(v, 1.0, 0.05) << x;
}

TEST(Riesz, DimensionErrors) {
  EXPECT_THROW(riesz_potential(bump_field(1, 1.0), {0.5, 1}), DimensionError);
  EXPECT_THROW(riesz_potential(bump_field(2, 1.0), {0.25, 2}), DimensionError);
}

TEST(Riesz, SigmaWindow) {
  const RieszResult r = riesz_potential(bump_field(1, 1.0), {0.25, 1});
  DensityModel d;
  EXPECT_THROW(lemma42_check(r, d, 0.95, {4, 8}, 0.6), ParameterError);
  EXPECT_THROW(lemma42_check(r, d, 0.95, {4, 8}, 0.0), ParameterError);
}
