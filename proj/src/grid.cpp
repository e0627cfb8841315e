#include "fraccert/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <sstream>

#include "fraccert/errors.hpp"

namespace fraccert {

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

bool power_of_two(int m) { return m > 0 && (m & (m - 1)) == 0; }

double wavenumber(int j, int M, double L) {
  const int jj = j <= M / 2 ? j : j - M;
  return M_PI * jj / L;
}

// Multiplier application on a grid without padding.
std::vector<double> multiply(const PeriodicGrid& g, const std::vector<double>& in,
                             const std::function<double(double)>& m) {
  const int M = g.M;
  std::vector<double> data = in;
  if (g.N == 1) {
    const int nc = M / 2 + 1;
    fftw_complex* spec = fftw_alloc_complex(nc);
    fftw_plan fwd, bwd;
    {
      std::lock_guard<std::mutex> lock(planner_mutex());
      fwd = fftw_plan_dft_r2c_1d(M, data.data(), spec, FFTW_ESTIMATE);
      bwd = fftw_plan_dft_c2r_1d(M, spec, data.data(), FFTW_ESTIMATE);
    }
    fftw_execute(fwd);
    for (int j = 0; j < nc; ++j) {
      const double f = m(std::abs(wavenumber(j, M, g.L))) / M;
      spec[j][0] *= f;
      spec[j][1] *= f;
    }
    fftw_execute(bwd);
    {
      std::lock_guard<std::mutex> lock(planner_mutex());
      fftw_destroy_plan(fwd);
      fftw_destroy_plan(bwd);
    }
    fftw_free(spec);
  } else {
    const int nc = M / 2 + 1;
    fftw_complex* spec = fftw_alloc_complex(static_cast<std::size_t>(M) * nc);
    fftw_plan fwd, bwd;
    {
      std::lock_guard<std::mutex> lock(planner_mutex());
      fwd = fftw_plan_dft_r2c_2d(M, M, data.data(), spec, FFTW_ESTIMATE);
      bwd = fftw_plan_dft_c2r_2d(M, M, spec, data.data(), FFTW_ESTIMATE);
    }
    fftw_execute(fwd);
    const double scale = 1.0 / (static_cast<double>(M) * M);
    for (int i = 0; i < M; ++i) {
      const double k1 = wavenumber(i, M, g.L);
      for (int j = 0; j < nc; ++j) {
        const double k2 = wavenumber(j, M, g.L);
        const double f = m(std::sqrt(k1 * k1 + k2 * k2)) * scale;
        spec[static_cast<std::size_t>(i) * nc + j][0] *= f;
        spec[static_cast<std::size_t>(i) * nc + j][1] *= f;
      }
    }
    fftw_execute(bwd);
    {
      std::lock_guard<std::mutex> lock(planner_mutex());
      fftw_destroy_plan(fwd);
      fftw_destroy_plan(bwd);
    }
    fftw_free(spec);
  }
  return data;
}

}  // namespace

Point PeriodicGrid::point(std::size_t idx) const {
  if (N == 1) return Point{coord(static_cast<int>(idx))};
  return Point{coord(static_cast<int>(idx / M)), coord(static_cast<int>(idx % M))};
}

void PeriodicGrid::validate() const {
  if (N != 1 && N != 2) throw ParameterError("periodic grid supports N = 1 or 2");
  if (!power_of_two(M) || M < 4) {
    std::ostringstream os;
    os << "grid resolution M must be a power of two >= 4, got " << M;
    throw ParameterError(os.str());
  }
  if (!(L > 0.0)) throw ParameterError("grid half-width L must be positive");
}

GridField GridField::zeros(const PeriodicGrid& g) {
  g.validate();
  return GridField{g, std::vector<double>(g.size(), 0.0)};
}

GridField GridField::sample(const PeriodicGrid& g, const std::function<double(const Point&)>& f) {
  GridField u = zeros(g);
  for (std::size_t i = 0; i < u.values.size(); ++i) u.values[i] = f(g.point(i));
  return u;
}

double GridField::sum() const {
  double s = 0.0;
  for (double v : values) s += v;
  return s;
}

double GridField::max_abs() const {
  double m = 0.0;
  for (double v : values) m = std::max(m, std::abs(v));
  return m;
}

GridField apply_multiplier(const GridField& u, const std::function<double(double)>& m, int padding) {
  u.grid.validate();
  if (padding < 1 || !power_of_two(padding)) throw ParameterError("padding factor must be a power of two");
  if (padding == 1) return GridField{u.grid, multiply(u.grid, u.values, m)};

  const PeriodicGrid& g = u.grid;
  PeriodicGrid big{g.N, g.M * padding, g.L * padding};
  const int off = (big.M - g.M) / 2;
  std::vector<double> data(big.size(), 0.0);
  if (g.N == 1) {
    for (int i = 0; i < g.M; ++i) data[off + i] = u.values[i];
  } else {
    for (int i = 0; i < g.M; ++i)
      for (int j = 0; j < g.M; ++j)
        data[static_cast<std::size_t>(i + off) * big.M + (j + off)] = u.values[static_cast<std::size_t>(i) * g.M + j];
  }
  std::vector<double> out = multiply(big, data, m);
  GridField r = GridField::zeros(g);
  if (g.N == 1) {
    for (int i = 0; i < g.M; ++i) r.values[i] = out[off + i];
  } else {
    for (int i = 0; i < g.M; ++i)
      for (int j = 0; j < g.M; ++j)
        r.values[static_cast<std::size_t>(i) * g.M + j] = out[static_cast<std::size_t>(i + off) * big.M + (j + off)];
  }
  return r;
}

GridField flap_spectral(const GridField& u, const FracOrder& fo, SpectralOptions opt) {
  fo.validate();
  const double two_s = 2.0 * fo.s;
  return apply_multiplier(u, [two_s](double k) { return k == 0.0 ? 0.0 : std::pow(k, two_s); }, opt.padding);
}

double outer_mass_fraction(const GridField& u) {
  const PeriodicGrid& g = u.grid;
  double total = 0.0;
  double outer = 0.0;
  for (std::size_t i = 0; i < u.values.size(); ++i) {
    const Point x = g.point(i);
    bool out = false;
    for (double c : x) out = out || std::abs(c) > 0.5 * g.L;
    total += std::abs(u.values[i]);
    if (out) outer += std::abs(u.values[i]);
  }
  return total > 0.0 ? outer / total : 0.0;
}

}  // namespace fraccert
