#include "fraccert/solver.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

#include "fraccert/errors.hpp"
#include "fraccert/heatkernel.hpp"

namespace fraccert {

namespace {

std::vector<double> sample_density(const PeriodicGrid& g, const DensityModel& density, double s) {
  std::vector<double> rho(g.size());
  for (std::size_t i = 0; i < rho.size(); ++i) rho[i] = density(g.point(i), s);
  return rho;
}

void record(Trajectory& traj, const GridField& u, double t, long step) {
  EvolutionState st;
  st.t = t;
  st.step = step;
  st.u = u;
  st.mass = u.integral();
  double e = 0.0;
  for (double v : u.values) e += v * v;
  st.energy = e * u.grid.cell_volume();
  traj.states.push_back(std::move(st));
}

void check_finite(const GridField& u, double t) {
  for (double v : u.values) {
    if (!std::isfinite(v)) {
      std::ostringstream os;
      os << "non-finite value at t = " << t;
      throw StabilityError(os.str());
    }
  }
}

}  // namespace

double stable_step(const GridField& u0, const DensityModel& density, const FracOrder& fo) {
  const auto rho = sample_density(u0.grid, density, fo.s);
  const double rmin = *std::min_element(rho.begin(), rho.end());
  const double lmax = std::pow(M_PI * u0.grid.M / u0.grid.L, 2.0 * fo.s);
  return 0.5 * rmin / lmax;
}

Trajectory evolve(const GridField& u0, const DensityModel& density, const FracOrder& fo, double T, double dt,
                  EvolveOptions opt) {
  fo.validate();
  density.validate();
  u0.grid.validate();
  if (u0.grid.N != fo.N) throw ParameterError("grid dimension differs from N");
  if (!(T >= 0.0) || !(dt > 0.0)) throw ParameterError("evolve needs T >= 0 and dt > 0");
  if (opt.store_every < 1) throw ParameterError("store_every must be positive");

  const auto rho = sample_density(u0.grid, density, fo.s);
  const auto [pmin, pmax] = std::minmax_element(rho.begin(), rho.end());
  const double rmin = *pmin;
  const double rmax = *pmax;
  if (!(rmin > 0.0)) throw ParameterError("density must be positive on the grid");
  const bool constant = rmax - rmin <= 1e-15 * rmax;

  Trajectory traj;
  traj.fo = fo;
  traj.dt = dt;
  traj.scheme = constant ? "exact" : "lawson";
  const double s2 = 2.0 * fo.s;
  if (!constant) {
    const double limit = 0.5 * rmin / std::pow(M_PI * u0.grid.M / u0.grid.L, s2);
    if (dt > limit) {
      std::ostringstream os;
      os << "dt = " << dt << " exceeds the stability limit " << limit;
      throw StabilityError(os.str());
    }
  }
  const double c = 1.0 / rmax;

  GridField u = u0;
  check_finite(u, 0.0);
  record(traj, u, 0.0, 0);
  double t = 0.0;
  long n = 0;
  while (t < T) {
    const double h = std::min(dt, T - t);
    if (constant) {
      u = apply_multiplier(u, [&](double k) { return std::exp(-h * c * std::pow(k, s2)); });
    } else {
      const GridField Au = apply_multiplier(u, [&](double k) { return std::pow(k, s2); });
      for (std::size_t i = 0; i < u.values.size(); ++i) u.values[i] -= h * (1.0 / rho[i] - c) * Au.values[i];
      u = apply_multiplier(u, [&](double k) { return std::exp(-h * c * std::pow(k, s2)); });
    }
    ++n;
    t += h;
    if (T - t <= 1e-12 * std::max(1.0, T)) t = T;
    check_finite(u, t);
    if (n % opt.store_every == 0 || t >= T) record(traj, u, t, n);
  }
  traj.steps = n;
  return traj;
}

double weighted_lp_norm(const GridField& u, double beta, double p) {
  if (!(p >= 1.0)) throw ParameterError("weighted_lp_norm needs p >= 1");
  if (!(beta > 0.0)) throw ParameterError("weighted_lp_norm needs beta > 0");
  double sum = 0.0;
  for (std::size_t i = 0; i < u.values.size(); ++i) {
    const double r = norm(u.grid.point(i));
    sum += std::pow(std::abs(u.values[i]), p) * std::pow(1.0 + r * r, -0.5 * beta);
  }
  return sum * u.grid.cell_volume();
}

double weighted_lp_norm(const Trajectory& traj, double beta, double p) {
  if (traj.states.empty()) return 0.0;
  if (traj.states.size() == 1) return 0.0;
  double total = 0.0;
  double prev = weighted_lp_norm(traj.states[0].u, beta, p);
  for (std::size_t k = 1; k < traj.states.size(); ++k) {
    const double cur = weighted_lp_norm(traj.states[k].u, beta, p);
    total += 0.5 * (prev + cur) * (traj.states[k].t - traj.states[k - 1].t);
    prev = cur;
  }
  return total;
}

std::vector<double> energy_monitor(const Trajectory& traj, const DensityModel& density, const WeightFn& phi,
                                   double p) {
  std::vector<double> out;
  for (const auto& st : traj.states) {
    double sum = 0.0;
    for (std::size_t i = 0; i < st.u.values.size(); ++i) {
      const Point x = st.u.grid.point(i);
      sum += density(x, traj.fo.s) * std::pow(std::abs(st.u.values[i]), p) * phi(x, st.t);
    }
    out.push_back(sum * st.u.grid.cell_volume());
  }
  return out;
}

CrosscheckReport convolution_crosscheck(const GridField& u0, double t, const FracOrder& fo) {
  if (fo.N != 1) throw DimensionError("convolution_crosscheck is implemented for N = 1");
  CrosscheckReport rep;
  rep.t = t;
  rep.outer_mass = outer_mass_fraction(u0);
  if (rep.outer_mass > 1e-6) throw BoxTooSmallError("initial data must lie in the central half of the box");
  if (t == 0.0) return rep;
  DensityModel unit;
  const Trajectory traj = evolve(u0, unit, fo, t, t);
  const GridField& a = traj.states.back().u;
  const KernelProfile kp(fo);
  ConvolutionOptions opt;
  opt.mode = BoundaryMode::PERIODIC;
  const GridField b = convolution_solution(u0, t, kp, opt);
  double num = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) num = std::max(num, std::abs(a.values[i] - b.values[i]));
  rep.discrepancy = num / b.max_abs();
  rep.wrap_mass = kp.tail_mass(u0.grid.L, t);
  return rep;
}

std::string trajectory_csv(const Trajectory& traj) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << (traj.fo.N == 1 ? "t,x,u\n" : "t,x,y,u\n");
  for (const auto& st : traj.states) {
    for (std::size_t i = 0; i < st.u.values.size(); ++i) {
      const Point x = st.u.grid.point(i);
      os << st.t;
      for (double c : x) os << ',' << c;
      os << ',' << st.u.values[i] << '\n';
    }
  }
  return os.str();
}

nlohmann::json trajectory_metadata(const Trajectory& traj) {
  nlohmann::json j;
  j["N"] = traj.fo.N;
  j["s"] = traj.fo.s;
  j["dt"] = traj.dt;
  j["scheme"] = traj.scheme;
  j["steps"] = traj.steps;
  if (!traj.states.empty()) {
    const auto& g = traj.states.front().u.grid;
    j["grid"] = {{"M", g.M}, {"L", g.L}};
  }
  auto& st = j["states"] = nlohmann::json::array();
  for (const auto& s : traj.states) st.push_back({{"t", s.t}, {"step", s.step}, {"mass", s.mass}, {"energy", s.energy}});
  return j;
}

}  // namespace fraccert
