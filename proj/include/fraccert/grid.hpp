#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "fraccert/field.hpp"

namespace fraccert {

// Uniform periodic grid on [-L, L)^N with M points per axis, N in {1, 2}.
struct PeriodicGrid {
  int N = 1;
  int M = 256;
  double L = 10.0;

  double h() const { return 2.0 * L / M; }
  double coord(int i) const { return -L + i * h(); }
  std::size_t size() const { return N == 1 ? static_cast<std::size_t>(M) : static_cast<std::size_t>(M) * M; }
  double cell_volume() const { return N == 1 ? h() : h() * h(); }
  Point point(std::size_t idx) const;
  void validate() const;
};

// Samples on a PeriodicGrid.  For N = 2 the layout is row-major with the
// first coordinate as the slow index.
struct GridField {
  PeriodicGrid grid;
  std::vector<double> values;

  static GridField zeros(const PeriodicGrid& g);
  static GridField sample(const PeriodicGrid& g, const std::function<double(const Point&)>& f);
  static GridField sample(const PeriodicGrid& g, const ScalarField& u) { return sample(g, u.eval); }

  double sum() const;
  double integral() const { return sum() * grid.cell_volume(); }
  double max_abs() const;
};

// Applies the radial Fourier multiplier m(|k|) on the periodic box.  With
// padding > 1 the field is embedded, centred, in a box `padding` times
// larger before transforming (free-space surrogate) and cropped afterwards.
GridField apply_multiplier(const GridField& u, const std::function<double(double)>& m, int padding = 1);

struct SpectralOptions {
  int padding = 1;
};

// (-Delta)^s through the multiplier |k|^{2s}.
GridField flap_spectral(const GridField& u, const FracOrder& fo, SpectralOptions opt = {});

// Fraction of the L1 mass of u lying outside the central half box
// (|x_i| > L/2 for some i); the free-space surrogate needs it below 1e-10.
double outer_mass_fraction(const GridField& u);

}  // namespace fraccert
