#include <gtest/gtest.h>

#include <cmath>

#include "fraccert/errors.hpp"
#include "fraccert/heatkernel.hpp"

using namespace fraccert;

namespace {

double poisson(double x, double t) { return t / (M_PI * (x * x + t * t)); }

}  // namespace

TEST(KernelProfile, PoissonKernel) {
  const KernelProfile kp({0.5, 1});
  for (double t : {0.1, 1.0, 10.0})
    for (double x : {-20.0, -3.0, 0.0, 0.4, 7.0, 20.0})
      EXPECT_NEAR(kernel_eval(kp, Point{x}, t), poisson(x, t), 1e-6 * poisson(x, t)) << x << " " << t;
  EXPECT_NEAR(kp.mass(), 1.0, 1e-6);
}

TEST(KernelProfile, FrozenProfiles) {
  // (1/pi) int_0^inf cos(r k) exp(-k^{2s}) dk, mpmath on a fine partition
  const KernelProfile a({0.25, 1});
  EXPECT_NEAR(a.profile(0.5), 0.170762401725206224, 1e-9);
  EXPECT_NEAR(a.profile(2.0), 0.0391428580496513429, 1e-9);
  EXPECT_NEAR(a.profile(10.0), 0.00487225538372111616, 1e-9);
  const KernelProfile b({0.75, 1});
  EXPECT_NEAR(b.profile(0.5), 0.262296840354090036, 1e-9);
  EXPECT_NEAR(b.profile(2.0), 0.0845396231261375201, 1e-9);
  EXPECT_NEAR(b.profile(10.0), 0.00104777602492944046, 1e-10);
}

TEST(KernelProfile, TableAgreesWithQuadrature) {
  const KernelProfile kp({0.75, 1});
  for (double r : {0.01, 0.3, 3.3, 17.0, 45.0})
    EXPECT_NEAR(kp.profile(r), kp.quadrature(r), 1e-9 * std::max(1.0, kp.quadrature(r)) + 1e-12) << r;
  EXPECT_LE(kp.edge_mismatch(), 1e-6);
}

TEST(KernelProfile, TailMassCauchy) {
  const KernelProfile kp({0.5, 1});
  for (double d : {0.5, 3.0, 40.0, 200.0}) {
    const double exact = 1.0 - 2.0 / M_PI * std::atan(d);
    EXPECT_NEAR(kp.tail_mass(d, 1.0), exact, 1e-7 * exact + 1e-12) << d;
  }
}

TEST(BoundCheck, SpreadWithinLimit) {
  std::vector<double> xs{0.0};
  for (int i = 0; i <= 40; ++i) xs.push_back(std::pow(10.0, -2.0 + 4.0 * i / 40.0));
  std::vector<double> ts{0.01, 0.1, 1.0, 10.0};
  for (double s : {0.25, 0.5, 0.75}) {
    const BoundReport b = bound_check(KernelProfile({s, 1}), xs, ts);
    EXPECT_TRUE(b.pass) << s;
    EXPECT_LE(b.spread, 100.0);
  }
}

TEST(Convolution, PeriodicMatchesSpectral) {
  const PeriodicGrid g{1, 512, 20.0};
  const GridField u0 = GridField::sample(g, gaussian_field(1));
  const KernelProfile kp({0.5, 1});
  ConvolutionOptions opt;
  opt.mode = BoundaryMode::PERIODIC;
  const GridField a = convolution_solution(u0, 0.5, kp, opt);
  const GridField b = apply_multiplier(u0, [](double k) { return std::exp(-0.5 * k); });
  double err = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) err = std::max(err, std::abs(a.values[i] - b.values[i]));
  EXPECT_LE(err / b.max_abs(), 1e-6);
}

TEST(Convolution, FreeSpaceBoxTooSmall) {
  const PeriodicGrid g{1, 256, 10.0};
  const GridField u0 = GridField::sample(g, gaussian_field(1));
  EXPECT_THROW(convolution_solution(u0, 1.0, KernelProfile({0.5, 1})), BoxTooSmallError);
}

TEST(KernelProfile, RejectsBadOrder) { EXPECT_THROW(KernelProfile({1.5, 1}), ParameterError); }
