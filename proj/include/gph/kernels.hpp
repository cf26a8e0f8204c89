#pragma once

#include "gph/grid.hpp"
#include "gph/tensor.hpp"
#include "gph/wavefield.hpp"

#include <vector>

namespace gph {

/// gamma^(k)(x_1..x_k; x'_1..x'_k) as a rank-2kd tensor; the first k slots are
/// the unprimed coordinates, the last k the primed ones.
struct DensityKernel {
  Grid grid;
  std::size_t k = 1;
  Tensor values;
};

void validate_kernel(const DensityKernel& gamma);

/// sum over the diagonal x = x' with measure dx^(kd).
cplx kernel_trace(const DensityKernel& gamma);

/// max |gamma(x;x') - conj gamma(x';x)| / max |gamma| (0 for the zero kernel).
double hermiticity_defect(const DensityKernel& gamma);

/// Swap primed/unprimed slots and conjugate.
DensityKernel hermitian_transpose(const DensityKernel& gamma);

/// L2 norm with measure dx^(2kd).
double kernel_l2_norm(const DensityKernel& gamma);

/// |phi><phi|^(tensor k) for a unit-norm field; throws on unnormalized input.
DensityKernel factorized_density(const WaveField& phi, std::size_t k);

/// Trace out the last pair: gamma'(x;x') = sum_y gamma(x,y;x',y) dx^d.
DensityKernel kernel_partial_trace(const DensityKernel& gamma);

enum class ContractSign { plus, minus, full };

/// Contraction operator B_{j;k+1..k+p} on a kernel over k+p pairs: the delta
/// pairs collapse the extra coordinates onto x_j (plus) or x'_j (minus);
/// full = plus - minus. Coordinate evaluation only, no 1/dx factors: each
/// delta pairs with one integral and cancels its measure weight.
DensityKernel contract(const DensityKernel& gamma, std::size_t j, std::size_t p,
                       ContractSign sign);

/// Free evolution U^(k)(t) = exp(it(Lap_x - Lap_x')) of a kernel.
DensityKernel kernel_free_propagate(const DensityKernel& gamma, double t);

/// Hilbert-Schmidt Sobolev norm: each Fourier mode weighted by
/// prod_j <xi_j>^alpha <xi'_j>^alpha, then the L2 norm.
double sobolev_norm(const DensityKernel& gamma, double alpha);

/// Trace distance sum |eig| of (gamma_a - gamma_b) as an operator on the
/// measure-weighted grid space; rejects inputs with relative Hermiticity
/// defect beyond 1e-8.
double trace_distance(const DensityKernel& a, const DensityKernel& b);

/// Eigenvalues (ascending) of the kernel as a measure-weighted Hermitian
/// operator; small instances only.
std::vector<double> kernel_eigenvalues(const DensityKernel& gamma);

struct BoundReport {
  double alpha = 0.0;
  double lhs = 0.0;   // ||S^(k,alpha) B gamma||
  double rhs = 0.0;   // ||S^(k+p,alpha) gamma||
  double ratio = 0.0;
  bool defined = true;  // false when both norms vanish
};

/// Norm pair of the contraction bound on a kernel over k+p pairs.
BoundReport bound_report(const DensityKernel& gamma, std::size_t j, std::size_t p,
                         double alpha);

/// Periodic Gaussian mollifier h_eps on the grid, normalized so that
/// sum h * dx^d = 1 (a probability measure on the torus).
std::vector<double> make_mollifier(const Grid& g, double eps);

/// Contraction with each delta pair replaced by h_eps(x_j - y) h_eps(x_j - y')
/// quadrature. h must be a grid probability measure; eps >= 2 dx.
DensityKernel mollified_contract(const DensityKernel& gamma, std::size_t j,
                                 std::size_t p, double eps, ContractSign sign,
                                 const std::vector<double>& h);
DensityKernel mollified_contract(const DensityKernel& gamma, std::size_t j,
                                 std::size_t p, double eps, ContractSign sign);

/// Regresses log |Tr J (B_eps - B) gamma| on log eps and returns the fitted
/// slope. eps_list must be decreasing, each >= 2 dx.
double mollifier_rate(const DensityKernel& gamma, const DensityKernel& observable,
                      std::size_t j, std::size_t p,
                      const std::vector<double>& eps_list);

}  // namespace gph
