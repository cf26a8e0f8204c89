#pragma once

#include "gph/grid.hpp"
#include "gph/kernels.hpp"
#include "gph/potential.hpp"
#include "gph/tensor.hpp"
#include "gph/wavefield.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace gph {

/// Rank-Nd bosonic-symmetric unit-norm tensor psi_N on Grid^N.
struct ManyBodyState {
  Grid grid;
  std::size_t N = 1;
  Tensor values;
};

class SizeError : public std::runtime_error {
 public:
  explicit SizeError(const std::string& what) : std::runtime_error(what) {}
};

void validate_state(const ManyBodyState& psi);

/// l2 norm with measure dx^(Nd).
double mb_norm(const ManyBodyState& psi);

/// Largest relative l2 change under an adjacent particle transposition.
double symmetry_defect(const ManyBodyState& psi);

/// phi^(tensor N) for a unit-norm one-particle field.
ManyBodyState product_state(const WaveField& phi, std::size_t N);

/// H_N psi, matrix-free: spectral kinetic sum plus the diagonal interaction
/// accumulated over all tuples with the 1/N^p prefactor.
Tensor apply_hamiltonian(const ManyBodyState& psi,
                         const std::vector<PotentialSpec>& specs,
                         const ScalingParams& scaling);

struct MBTrajectory {
  Grid grid;
  std::size_t N = 1;
  double dt = 0.0;
  std::size_t stride = 1;
  std::vector<Tensor> samples;
  double sample_dt() const { return dt * static_cast<double>(stride); }
  ManyBodyState at(std::size_t i) const { return {grid, N, samples.at(i)}; }
};

inline constexpr std::size_t kDefaultMemoryCap = std::size_t{1} << 24;

/// Strang split-step evolution exp(-i H_N t); kinetic spectral half-steps,
/// potential exact diagonal phase. Unitary and symmetry-preserving.
MBTrajectory evolve_manybody(const ManyBodyState& psi0,
                             const std::vector<PotentialSpec>& specs,
                             const ScalingParams& scaling, double T, double dt,
                             std::size_t stride = 1,
                             std::size_t memory_cap = kDefaultMemoryCap);

/// k-particle marginal density: partial trace over the last N-k particles,
/// gamma(x_k; x'_k) = sum_y psi(x_k, y) conj psi(x'_k, y) dx^((N-k)d).
DensityKernel marginal(const ManyBodyState& psi, std::size_t k);

/// <psi, (H_N + N)^k psi>, k in {1, 2}.
double energy_moment(const ManyBodyState& psi,
                     const std::vector<PotentialSpec>& specs,
                     const ScalingParams& scaling, int k);

/// <psi, prod_{j<=k} (1 - Lap_{x_j}) psi>.
double sobolev_product_expectation(const ManyBodyState& psi, int k);

/// C-infinity bump: 1 on [0,1], 0 on [2,inf); in between
/// f(2-s)/(f(2-s)+f(s-1)) with f(t) = exp(-1/t).
double chi_bump(double s);

/// Dense Hamiltonian matrix obtained by applying the matrix-free operator to
/// every basis tensor; dimension n^(Nd) capped at `dense_cap`.
Eigen::MatrixXcd dense_hamiltonian(const Grid& g, std::size_t N,
                                   const std::vector<PotentialSpec>& specs,
                                   const ScalingParams& scaling,
                                   std::size_t dense_cap = 4096);

/// chi(kappa H_N / N) psi / ||...||, applied through full diagonalization.
ManyBodyState chi_regularize(const ManyBodyState& psi,
                             const std::vector<PotentialSpec>& specs,
                             const ScalingParams& scaling, double kappa,
                             std::size_t dense_cap = 4096);

}  // namespace gph
