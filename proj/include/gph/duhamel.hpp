#pragma once

#include "gph/boardgame.hpp"
#include "gph/grid.hpp"
#include "gph/kernels.hpp"
#include "gph/wavefield.hpp"

#include <cstddef>
#include <functional>

namespace gph {

/// Samples the one-particle field at an arbitrary time.
using FieldSampler = std::function<Tensor(double)>;

/// Exact sampler for the free equation: phi(s) = U(s) phi0.
FieldSampler free_sampler(const WaveField& phi0);

/// The basic Duhamel term
///   I(mu, sigma) = int_{t_top >= t_sigma(1) >= ... >= t_sigma(n) >= 0}
///     U^(k)(t_top - t_1) B_{r_1} U^(k+Q_1)(t_1 - t_2) B_{r_2} ...
///     B_{r_n} gamma^(k+Q_n)(t_n) dt_1 ... dt_n
/// with gamma^(m)(s) the factorized density of the sampled field. Time
/// integration uses tensor-product Gauss-Legendre nodes on [0, t_top]^n
/// restricted to the order simplex by an indicator; both configurations of a
/// move comparison must share the node set.
DensityKernel duhamel_integral(const Grid& g, const TaggedConfiguration& config,
                               const FieldSampler& phi, double t_top,
                               std::size_t nodes_per_axis);

/// Relative difference |I(a) - I(b)| / max(|I(a)|, 1e-30) of two
/// configurations on a shared quadrature; the sampled field must be
/// unit-norm so the factorized densities are bosonic-symmetric.
double verify_move_invariance(const Grid& g, const TaggedConfiguration& a,
                              const TaggedConfiguration& b,
                              const FieldSampler& phi, double t_top,
                              std::size_t nodes_per_axis);

}  // namespace gph
