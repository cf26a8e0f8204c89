#pragma once

#include <cstddef>
#include <vector>

namespace gph {

/// Periodic spatial grid: d in {1,2}, n points per axis, box length L.
/// Wavenumbers follow the standard DFT ordering 0, 1, ..., n/2-1, -n/2, ..., -1
/// scaled by 2*pi/L; only |xi|^2 enters the dynamics, so the Nyquist sign
/// convention is immaterial.
struct Grid {
  int d = 1;
  std::size_t n = 0;
  double L = 0.0;
  double dx = 0.0;
  std::vector<double> xi;     // length n
  std::vector<double> coord;  // x_m = m*dx, length n

  /// Measure weight dx^axes carried by sums over Grid^(axes/d).
  double measure(std::size_t axes) const;
};

bool is_power_of_two(std::size_t n);

/// d in {1,2}, n even and >= 4 (power of two preferred for FFT speed), L > 0.
Grid make_grid(int d, std::size_t n, double L);

/// Signed minimum-image difference on the length-L torus, in [-L/2, L/2].
double min_image(double diff, double L);

}  // namespace gph
