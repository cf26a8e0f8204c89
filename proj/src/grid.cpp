#include "gph/grid.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gph {

bool is_power_of_two(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

double Grid::measure(std::size_t axes) const { return std::pow(dx, static_cast<double>(axes)); }

Grid make_grid(int d, std::size_t n, double L) {
  if (d != 1 && d != 2) throw std::invalid_argument("make_grid: d must be 1 or 2");
  if (n < 4 || n % 2 != 0)
    throw std::invalid_argument("make_grid: n must be even and >= 4");
  if (!(L > 0.0) || !std::isfinite(L)) throw std::invalid_argument("make_grid: L must be positive");
  Grid g;
  g.d = d;
  g.n = n;
  g.L = L;
  g.dx = L / static_cast<double>(n);
  g.xi.resize(n);
  g.coord.resize(n);
  const double dxi = 2.0 * std::numbers::pi / L;
  for (std::size_t m = 0; m < n; ++m) {
    const auto f = static_cast<double>(m < n / 2 ? static_cast<long long>(m)
                                                 : static_cast<long long>(m) - static_cast<long long>(n));
    g.xi[m] = dxi * f;
    g.coord[m] = g.dx * static_cast<double>(m);
  }
  return g;
}

double min_image(double diff, double L) { return diff - L * std::round(diff / L); }

}  // namespace gph
