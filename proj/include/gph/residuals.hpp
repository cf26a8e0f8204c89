#pragma once

#include "gph/kernels.hpp"
#include "gph/manybody.hpp"
#include "gph/potential.hpp"
#include "gph/wavefield.hpp"

#include <cstddef>
#include <vector>

namespace gph {

/// Contraction term of the limiting hierarchy on a factorized kernel built
/// from phi: sum_p b_p sum_j B_{j;k+1..k+p} gamma^(k+p) collapses to
/// (|phi(x_j)|^{2p} - |phi(x'_j)|^{2p}) gamma^(k), so the level-(k+p) kernel
/// is never materialized. Cross-checked against contract() in the tests.
DensityKernel gp_contraction_term(const WaveField& phi, std::size_t k,
                                  const NonlinearityCoefficients& coeffs,
                                  double b_sign = 1.0);

/// L2 norm of i * (centered dt-difference of gamma^(k)) minus the hierarchy
/// right-hand side at trajectory sample t_index (needs samples at
/// t_index -/+ 1). b_sign = -1 flips the contraction term (sanity guard).
double gp_residual(const Trajectory& traj, std::size_t k,
                   const NonlinearityCoefficients& coeffs, std::size_t t_index,
                   double b_sign = 1.0);

/// Right-hand side of the finite-N hierarchy at level k, assembled from the
/// marginals gamma^(k), ..., gamma^(k+p0):
///   sum_i [-Lap_i, gamma^(k)]
///   + sum_p { N^-p sum_{i_1<..<i_{p+1}<=k} [V_N, gamma^(k)]
///           + sum_{m=1..p} (N-k)...(N-k-m+1)/N^p
///             sum_{i_1<..<i_{p+1-m}<=k} Tr_{k+1..k+m} [V_N, gamma^(k+m)] }
/// with absent levels (k+m > N) contributing zero.
DensityKernel bbgky_rhs(const std::vector<DensityKernel>& marginals,
                        const std::vector<PotentialSpec>& specs,
                        const ScalingParams& scaling, std::size_t k);

/// L2 norm of i * (centered difference of gamma^(k) from the many-body
/// trajectory) minus bbgky_rhs at sample t_index.
double bbgky_residual(const MBTrajectory& traj,
                      const std::vector<PotentialSpec>& specs,
                      const ScalingParams& scaling, std::size_t k,
                      std::size_t t_index);

/// Closed-form coefficient (N-k)(N-k-1)...(N-k-m+1)/N^p of the m-times-traced
/// term (exposed for the prefactor audit).
double bbgky_prefactor(std::size_t N, std::size_t k, int p, int m);

}  // namespace gph
