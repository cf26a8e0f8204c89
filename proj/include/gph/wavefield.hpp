#pragma once

#include "gph/grid.hpp"
#include "gph/tensor.hpp"

#include <cstddef>
#include <vector>

namespace gph {

/// One-particle complex field phi on a Grid (rank-d tensor).
struct WaveField {
  Grid grid;
  Tensor values;
};

/// Coefficients b0^(1) ... b0^(p0) of the combined power nonlinearity
/// sum_p b0^(p) |phi|^(2p) phi. b[p-1] holds b0^(p).
struct NonlinearityCoefficients {
  std::vector<double> b;
  int p0() const { return static_cast<int>(b.size()); }
};

void validate_coefficients(const NonlinearityCoefficients& c);

double mass(const WaveField& phi);

/// energy = int |grad phi|^2 + sum_p b_p/(p+1) |phi|^(2p+2), measure dx^d.
double energy(const WaveField& phi, const NonlinearityCoefficients& c);

/// l2 norm with measure dx^d.
double field_norm(const WaveField& phi);

/// Normalized periodic Gaussian packet centered at x0 with width sigma,
/// modulated by exp(i xi0 . x). The packet must be well inside the box for
/// localized-test accuracy.
WaveField gaussian_packet(const Grid& g, double sigma, double x0, double xi0 = 0.0);

/// Plane wave A exp(i xi . x); xi must be an exact grid wavenumber per axis.
WaveField plane_wave(const Grid& g, double amplitude, const std::vector<double>& xi);

/// Trajectory of phi sampled every `stride` steps (sample 0 is the initial
/// state). sample_dt = dt * stride.
struct Trajectory {
  Grid grid;
  NonlinearityCoefficients coeffs;
  double dt = 0.0;
  std::size_t stride = 1;
  std::vector<Tensor> samples;
  double sample_dt() const { return dt * static_cast<double>(stride); }
  WaveField at(std::size_t i) const { return {grid, samples.at(i)}; }
};

/// Strang split-step evolution of i d/dt phi = -Lap phi + sum_p b_p |phi|^2p phi.
/// Half kinetic (spectral), full nonlinear phase rotation (exact pointwise),
/// half kinetic. |T| must be an integer multiple of dt and stride must divide
/// the step count; negative T evolves backward.
Trajectory nls_evolve(const WaveField& phi0, const NonlinearityCoefficients& c,
                      double T, double dt, std::size_t stride = 1);

}  // namespace gph
