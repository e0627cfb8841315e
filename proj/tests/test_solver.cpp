#include <gtest/gtest.h>

#include <cmath>

#include "fraccert/errors.hpp"
#include "fraccert/solver.hpp"

using namespace fraccert;

namespace {

double sup_diff(const GridField& a, const GridField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) m = std::max(m, std::abs(a.values[i] - b.values[i]));
  return m;
}

DensityModel variable_density() {
  DensityModel d;
  d.alpha = 0.5;
  d.rho = [](const Point& x) { return 1.0 / std::sqrt(1.0 + x[0] * x[0]); };
  return d;
}

}  // namespace

TEST(Evolve, ZeroStaysZero) {
  const PeriodicGrid g{1, 128, 10.0};
  const Trajectory tr = evolve(GridField::zeros(g), DensityModel{}, {0.5, 1}, 1.0, 0.1);
  for (const auto& st : tr.states)
    for (double v : st.u.values) ASSERT_EQ(v, 0.0);
  const Trajectory tv = evolve(GridField::zeros(g), variable_density(), {0.5, 1}, 0.05, 1e-3);
  for (double v : tv.states.back().u.values) ASSERT_EQ(v, 0.0);
}

TEST(Evolve, SingleModeExact) {
  const PeriodicGrid g{1, 64, M_PI};
  const double k = 3.0;
  const double s = 0.75;
  const GridField u0 = GridField::sample(g, [k](const Point& x) { return std::cos(k * x[0]); });
  const Trajectory tr = evolve(u0, DensityModel{}, {s, 1}, 0.7, 0.1);
  const double decay = std::exp(-std::pow(k, 2.0 * s) * 0.7);
  const GridField ex = GridField::sample(g, [&](const Point& x) { return decay * std::cos(k * x[0]); });
  EXPECT_LE(sup_diff(tr.states.back().u, ex), 1e-13);
  EXPECT_EQ(tr.scheme, "exact");
  EXPECT_DOUBLE_EQ(tr.states.back().t, 0.7);
}

TEST(Evolve, SemigroupSplit) {
  const PeriodicGrid g{1, 512, 20.0};
  const GridField u0 = GridField::sample(g, gaussian_field(1));
  const GridField a = evolve(u0, DensityModel{}, {0.5, 1}, 0.5, 0.5).states.back().u;
  const GridField b = evolve(u0, DensityModel{}, {0.5, 1}, 0.5, 0.25).states.back().u;
  EXPECT_LE(sup_diff(a, b) / a.max_abs(), 1e-4);
}

TEST(Evolve, OrderPreservation) {
  const PeriodicGrid g{1, 256, 20.0};
  const GridField u0 = GridField::sample(g, gaussian_field(1));
  const GridField v0 = GridField::sample(g, [](const Point& x) { return std::exp(-x[0] * x[0]) + 0.5 * std::exp(-(x[0] - 1) * (x[0] - 1)); });
  const GridField u = evolve(u0, DensityModel{}, {0.5, 1}, 0.3, 0.3).states.back().u;
  const GridField v = evolve(v0, DensityModel{}, {0.5, 1}, 0.3, 0.3).states.back().u;
  for (std::size_t i = 0; i < u.values.size(); ++i) ASSERT_LE(u.values[i], v.values[i] + 1e-10);
}

TEST(Evolve, StabilityRule) {
  const PeriodicGrid g{1, 256, 20.0};
  const GridField u0 = GridField::sample(g, bump_field(1, 1.0));
  const double lim = stable_step(u0, variable_density(), {0.5, 1});
  EXPECT_THROW(evolve(u0, variable_density(), {0.5, 1}, 0.1, 2.0 * lim), StabilityError);
  EXPECT_NO_THROW(evolve(u0, variable_density(), {0.5, 1}, 0.01, lim));
}

TEST(Evolve, SelfConvergenceVariableDensity) {
  const PeriodicGrid g{1, 256, 20.0};
  const GridField u0 = GridField::sample(g, bump_field(1, 1.0));
  const FracOrder fo{0.5, 1};
  const double lim = stable_step(u0, variable_density(), fo);
  const double dt = 0.5 / std::ceil(0.5 / lim);
  const GridField a = evolve(u0, variable_density(), fo, 0.5, dt).states.back().u;
  const GridField b = evolve(u0, variable_density(), fo, 0.5, dt / 2).states.back().u;
  const GridField c = evolve(u0, variable_density(), fo, 0.5, dt / 4).states.back().u;
  const double e1 = sup_diff(a, c);
  const double e2 = sup_diff(b, c);
  EXPECT_GE(e1 / e2, 1.8);
  EXPECT_LE(sup_diff(a, b) / c.max_abs(), 1e-4);
}

TEST(Energy, L2Dissipative) {
  const PeriodicGrid g{1, 256, 20.0};
  const GridField u0 = GridField::sample(g, bump_field(1, 2.0));
  const Trajectory tr = evolve(u0, DensityModel{}, {0.3, 1}, 1.0, 0.05);
  const auto E = energy_monitor(tr, DensityModel{}, [](const Point&, double) { return 1.0; }, 2.0);
  for (std::size_t k = 1; k < E.size(); ++k) ASSERT_LE(E[k], E[k - 1] + 1e-12 * E[0]);
  const auto Z = energy_monitor(evolve(GridField::zeros(g), DensityModel{}, {0.3, 1}, 1.0, 0.1), DensityModel{},
                                [](const Point&, double) { return 1.0; });
  for (double z : Z) EXPECT_EQ(z, 0.0);
}

TEST(Norm, WeightedValues) {
  const PeriodicGrid g{1, 8192, 400.0};
  const GridField one = GridField::sample(g, constant_field(1, 1.0));
  EXPECT_NEAR(weighted_lp_norm(one, 2.0, 1.0), M_PI - 2.0 * std::atan(1.0 / 400.0), 1e-6);
  EXPECT_EQ(weighted_lp_norm(GridField::zeros(g), 2.0, 1.0), 0.0);
  GridField two = one;
  for (double& v : two.values) v *= -2.0;
  EXPECT_NEAR(weighted_lp_norm(two, 2.0, 3.0), 8.0 * weighted_lp_norm(one, 2.0, 3.0), 1e-10);
  EXPECT_THROW(weighted_lp_norm(one, 2.0, 0.5), ParameterError);
}

TEST(Norm, SpaceTimeTrapezoid) {
  const PeriodicGrid g{1, 128, 10.0};
  const GridField one = GridField::sample(g, constant_field(1, 1.0));
  const Trajectory tr = evolve(one, DensityModel{}, {0.5, 1}, 2.0, 0.5);
  EXPECT_NEAR(weighted_lp_norm(tr, 2.0, 1.0), 2.0 * weighted_lp_norm(one, 2.0, 1.0), 1e-10);
}

TEST(Crosscheck, KernelConvolution) {
  const PeriodicGrid g{1, 512, 20.0};
  const GridField u0 = GridField::sample(g, gaussian_field(1));
  EXPECT_EQ(convolution_crosscheck(u0, 0.0, {0.5, 1}).discrepancy, 0.0);
  const CrosscheckReport r = convolution_crosscheck(u0, 0.5, {0.5, 1});
  EXPECT_LE(r.discrepancy, 1e-3);
  EXPECT_GT(r.wrap_mass, 0.0);
}

TEST(Export, CsvAndMetadata) {
  const PeriodicGrid g{1, 8, 1.0};
  const Trajectory tr = evolve(GridField::sample(g, gaussian_field(1)), DensityModel{}, {0.5, 1}, 0.2, 0.1);
  const std::string csv = trajectory_csv(tr);
  EXPECT_EQ(csv.substr(0, 6), "t,x,u\n");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + 3 * 8);
  const auto j = trajectory_metadata(tr);
  EXPECT_EQ(j["steps"], 2);
  EXPECT_EQ(j["states"].size(), 3u);
}
