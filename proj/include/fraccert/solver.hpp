#pragma once

#include <functional>
#include <string>
#include <vector>

#include "fraccert/certify.hpp"
#include "fraccert/field.hpp"
#include "fraccert/grid.hpp"
#include "json.hpp"

namespace fraccert {

struct EvolutionState {
  double t = 0.0;
  long step = 0;
  GridField u;
  double mass = 0.0;    // int u
  double energy = 0.0;  // int u^2
};

struct Trajectory {
  FracOrder fo;
  double dt = 0.0;
  std::string scheme;  // "exact" or "lawson"
  long steps = 0;
  std::vector<EvolutionState> states;
};

struct EvolveOptions {
  int store_every = 1;  // keep every n-th state (the first and last are always kept)
};

// Largest admissible step of the variable-density scheme: 0.5 rho_min / (pi M / L)^{2s}.
double stable_step(const GridField& u0, const DensityModel& density, const FracOrder& fo);

// rho u_t + (-Delta)^s u = 0 on the periodic grid.  Constant density uses the exact
// multiplier exp(-dt |k|^{2s} / K).  Variable density uses a first-order Lawson step
//   u <- exp(-c dt A) (u - dt (1/rho - c) A u),  c = 1/rho_max,  A = (-Delta)^s,
// and throws StabilityError when dt exceeds stable_step or a value turns non-finite.
// The final step is shortened to land on T.
Trajectory evolve(const GridField& u0, const DensityModel& density, const FracOrder& fo, double T, double dt,
                  EvolveOptions opt = {});

// sum |u|^p psi h^N with psi = (1 + |x|^2)^{-beta/2}.
double weighted_lp_norm(const GridField& u, double beta, double p);
// Trapezoidal rule in t over the stored states.
double weighted_lp_norm(const Trajectory& traj, double beta, double p);

using WeightFn = std::function<double(const Point&, double)>;

// E(t) = int rho |u|^p phi(x, t) dx per stored state.
std::vector<double> energy_monitor(const Trajectory& traj, const DensityModel& density, const WeightFn& phi,
                                   double p = 2.0);

struct CrosscheckReport {
  double t = 0.0;
  double discrepancy = 0.0;  // sup |evolve - convolution| / sup |convolution|
  double wrap_mass = 0.0;    // kernel mass beyond the half period L
  double outer_mass = 0.0;   // fraction of |u0| outside the central half box
};

// Exact spectral evolution with rho = 1 against the periodic kernel convolution (N = 1).
CrosscheckReport convolution_crosscheck(const GridField& u0, double t, const FracOrder& fo);

// CSV with columns t, x, u (N = 1) or t, x, y, u (N = 2).
std::string trajectory_csv(const Trajectory& traj);
nlohmann::json trajectory_metadata(const Trajectory& traj);

}  // namespace fraccert
