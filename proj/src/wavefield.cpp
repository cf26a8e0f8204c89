#include "gph/wavefield.hpp"

#include "gph/spectral.hpp"

#include <cmath>
#include <stdexcept>

namespace gph {
namespace {

void validate_field(const WaveField& phi) {
  if (slot_count(phi.values, phi.grid) != 1)
    throw std::invalid_argument("WaveField must have exactly one particle slot");
  if (!phi.values.all_finite())
    throw std::invalid_argument("WaveField contains non-finite values");
}

// sum_p b_p a^p with a = |phi|^2.
double power_sum(const std::vector<double>& b, double a) {
  double acc = 0.0;
  double ap = 1.0;
  for (double bp : b) {
    ap *= a;
    acc += bp * ap;
  }
  return acc;
}

}  // namespace

void validate_coefficients(const NonlinearityCoefficients& c) {
  for (double bp : c.b)
    if (!(bp >= 0.0) || !std::isfinite(bp))
      throw std::invalid_argument("nonlinearity coefficients must be finite and >= 0");
}

double mass(const WaveField& phi) {
  validate_field(phi);
  double acc = 0.0;
  for (std::size_t i = 0; i < phi.values.size(); ++i) acc += std::norm(phi.values[i]);
  return acc * phi.grid.measure(phi.values.rank());
}

double field_norm(const WaveField& phi) { return std::sqrt(mass(phi)); }

double energy(const WaveField& phi, const NonlinearityCoefficients& c) {
  validate_field(phi);
  validate_coefficients(c);
  const double w = phi.grid.measure(phi.values.rank());
  const Tensor lap = laplacian_apply(phi.values, phi.grid);
  double kinetic = -inner(phi.values, lap, w).real();
  double pot = 0.0;
  for (std::size_t i = 0; i < phi.values.size(); ++i) {
    const double a = std::norm(phi.values[i]);
    double ap = a;
    for (int p = 1; p <= c.p0(); ++p) {
      ap *= a;  // a^(p+1)
      pot += c.b[p - 1] / (p + 1.0) * ap;
    }
  }
  return kinetic + pot * w;
}

WaveField gaussian_packet(const Grid& g, double sigma, double x0, double xi0) {
  if (!(sigma > 0.0)) throw std::invalid_argument("gaussian_packet: sigma must be positive");
  const auto d = static_cast<std::size_t>(g.d);
  Tensor v(std::vector<std::size_t>(d, g.n));
  for_each_index(v.shape(), [&](std::size_t flat, const std::vector<std::size_t>& idx) {
    double r2 = 0.0, phase = 0.0;
    for (std::size_t a = 0; a < d; ++a) {
      const double x = min_image(g.coord[idx[a]] - x0, g.L);
      r2 += x * x;
      phase += xi0 * g.coord[idx[a]];
    }
    v[flat] = std::polar(std::exp(-r2 / (4.0 * sigma * sigma)), phase);
  });
  WaveField phi{g, std::move(v)};
  const double nrm = field_norm(phi);
  phi.values *= cplx{1.0 / nrm, 0.0};
  return phi;
}

WaveField plane_wave(const Grid& g, double amplitude, const std::vector<double>& xi) {
  const auto d = static_cast<std::size_t>(g.d);
  if (xi.size() != d) throw std::invalid_argument("plane_wave: one wavenumber per axis");
  Tensor v(std::vector<std::size_t>(d, g.n));
  for_each_index(v.shape(), [&](std::size_t flat, const std::vector<std::size_t>& idx) {
    double phase = 0.0;
    for (std::size_t a = 0; a < d; ++a) phase += xi[a] * g.coord[idx[a]];
    v[flat] = std::polar(amplitude, phase);
  });
  return {g, std::move(v)};
}

Trajectory nls_evolve(const WaveField& phi0, const NonlinearityCoefficients& c,
                      double T, double dt, std::size_t stride) {
  validate_field(phi0);
  validate_coefficients(c);
  if (!(dt > 0.0)) throw std::invalid_argument("nls_evolve: dt must be positive");
  if (stride == 0) throw std::invalid_argument("nls_evolve: stride must be >= 1");
  // T < 0 runs the same splitting with a negated step (backward evolution).
  const double step = T < 0.0 ? -dt : dt;
  const auto steps = static_cast<std::size_t>(std::llround(std::abs(T) / dt));
  if (std::abs(static_cast<double>(steps) * dt - std::abs(T)) > 1e-9 * std::max(1.0, std::abs(T)))
    throw std::invalid_argument("nls_evolve: T must be an integer multiple of dt");
  if (steps % stride != 0)
    throw std::invalid_argument("nls_evolve: stride must divide the step count");

  Trajectory traj{phi0.grid, c, step, stride, {}};
  traj.samples.reserve(steps / stride + 1);
  Tensor v = phi0.values;
  traj.samples.push_back(v);
  const Grid& g = phi0.grid;
  for (std::size_t s = 1; s <= steps; ++s) {
    v = free_propagate(v, g, step / 2.0);
    for (std::size_t i = 0; i < v.size(); ++i)
      v[i] *= std::polar(1.0, -step * power_sum(c.b, std::norm(v[i])));
    v = free_propagate(v, g, step / 2.0);
    if (s % stride == 0) traj.samples.push_back(v);
  }
  return traj;
}

}  // namespace gph
