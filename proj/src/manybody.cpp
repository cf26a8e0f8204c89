#include "gph/manybody.hpp"

#include "gph/spectral.hpp"

#include <cmath>
#include <complex>

namespace gph {
namespace {

using MatrixXc = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

int max_p(const std::vector<PotentialSpec>& specs) {
  int p0 = 1;
  for (const auto& s : specs) p0 = std::max(p0, s.p);
  return p0;
}

}  // namespace

void validate_state(const ManyBodyState& psi) {
  if (psi.N < 1) throw std::invalid_argument("ManyBodyState: N must be >= 1");
  if (slot_count(psi.values, psi.grid) != psi.N)
    throw std::invalid_argument("ManyBodyState: tensor must have N particle slots");
}

double mb_norm(const ManyBodyState& psi) {
  validate_state(psi);
  return psi.values.norm() * std::sqrt(psi.grid.measure(psi.N * psi.grid.d));
}

double symmetry_defect(const ManyBodyState& psi) {
  validate_state(psi);
  if (psi.N < 2) return 0.0;
  const auto d = static_cast<std::size_t>(psi.grid.d);
  const double nrm = psi.values.norm();
  if (nrm == 0.0) return 0.0;
  double worst = 0.0;
  std::vector<std::size_t> swapped(psi.values.rank());
  for (std::size_t s = 0; s + 1 < psi.N; ++s) {
    double acc = 0.0;
    for_each_index(psi.values.shape(), [&](std::size_t flat, const std::vector<std::size_t>& idx) {
      for (std::size_t a = 0; a < swapped.size(); ++a) swapped[a] = idx[a];
      for (std::size_t a = 0; a < d; ++a)
        std::swap(swapped[s * d + a], swapped[(s + 1) * d + a]);
      acc += std::norm(psi.values[flat] - psi.values[psi.values.flat_index(swapped)]);
    });
    worst = std::max(worst, std::sqrt(acc) / nrm);
  }
  return worst;
}

ManyBodyState product_state(const WaveField& phi, std::size_t N) {
  if (N < 1) throw std::invalid_argument("product_state: N must be >= 1");
  const double nrm = field_norm(phi);
  if (std::abs(nrm - 1.0) > 1e-8)
    throw std::invalid_argument("product_state: field is not unit-normalized");
  const auto d = static_cast<std::size_t>(phi.grid.d);
  const std::size_t side = phi.values.size();
  ManyBodyState psi{phi.grid, N, Tensor(std::vector<std::size_t>(N * d, phi.grid.n))};
  const std::size_t total = psi.values.size();
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rest = flat;
    std::size_t divisor = total;
    cplx v{1.0, 0.0};
    for (std::size_t s = 0; s < N; ++s) {
      divisor /= side;
      v *= phi.values[rest / divisor];
      rest %= divisor;
    }
    psi.values[flat] = v;
  }
  return psi;
}

Tensor apply_hamiltonian(const ManyBodyState& psi,
                         const std::vector<PotentialSpec>& specs,
                         const ScalingParams& scaling) {
  validate_state(psi);
  Tensor out = laplacian_apply(psi.values, psi.grid);
  out *= cplx{-1.0, 0.0};  // kinetic term sum_i (-Lap_i)
  if (!specs.empty()) {
    validate_scaling(scaling, max_p(specs), psi.grid);
    const auto W = total_potential(specs, scaling, psi.grid, psi.N);
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += W[i] * psi.values[i];
  }
  return out;
}

MBTrajectory evolve_manybody(const ManyBodyState& psi0,
                             const std::vector<PotentialSpec>& specs,
                             const ScalingParams& scaling, double T, double dt,
                             std::size_t stride, std::size_t memory_cap) {
  validate_state(psi0);
  if (!(dt > 0.0)) throw std::invalid_argument("evolve_manybody: dt must be positive");
  if (T < 0.0) throw std::invalid_argument("evolve_manybody: T must be >= 0");
  if (stride == 0) throw std::invalid_argument("evolve_manybody: stride must be >= 1");
  if (psi0.values.size() > memory_cap)
    throw SizeError("evolve_manybody: state size " + std::to_string(psi0.values.size()) +
                    " exceeds memory cap (N=" + std::to_string(psi0.N) +
                    ", n=" + std::to_string(psi0.grid.n) +
                    ", d=" + std::to_string(psi0.grid.d) + ")");
  const auto steps = static_cast<std::size_t>(std::llround(T / dt));
  if (std::abs(static_cast<double>(steps) * dt - T) > 1e-9 * std::max(1.0, T))
    throw std::invalid_argument("evolve_manybody: T must be an integer multiple of dt");
  if (steps % stride != 0)
    throw std::invalid_argument("evolve_manybody: stride must divide the step count");

  std::vector<double> W;
  if (!specs.empty()) {
    validate_scaling(scaling, max_p(specs), psi0.grid);
    W = total_potential(specs, scaling, psi0.grid, psi0.N);
  }

  MBTrajectory traj{psi0.grid, psi0.N, dt, stride, {}};
  traj.samples.reserve(steps / stride + 1);
  Tensor v = psi0.values;
  traj.samples.push_back(v);
  for (std::size_t s = 1; s <= steps; ++s) {
    v = free_propagate(v, psi0.grid, dt / 2.0);
    if (!W.empty())
      for (std::size_t i = 0; i < v.size(); ++i) v[i] *= std::polar(1.0, -dt * W[i]);
    v = free_propagate(v, psi0.grid, dt / 2.0);
    if (s % stride == 0) traj.samples.push_back(v);
  }
  return traj;
}

DensityKernel marginal(const ManyBodyState& psi, std::size_t k) {
  validate_state(psi);
  if (k < 1 || k > psi.N) throw std::invalid_argument("marginal: k out of range");
  const auto d = static_cast<std::size_t>(psi.grid.d);
  std::size_t rows = 1, cols = 1;
  for (std::size_t a = 0; a < k * d; ++a) rows *= psi.grid.n;
  for (std::size_t a = k * d; a < psi.N * d; ++a) cols *= psi.grid.n;
  Eigen::Map<const MatrixXc> A(psi.values.data(), static_cast<Eigen::Index>(rows),
                               static_cast<Eigen::Index>(cols));
  const double w = psi.grid.measure((psi.N - k) * d);
  DensityKernel out{psi.grid, k, Tensor(std::vector<std::size_t>(2 * k * d, psi.grid.n))};
  Eigen::Map<MatrixXc> G(out.values.data(), static_cast<Eigen::Index>(rows),
                         static_cast<Eigen::Index>(rows));
  G.noalias() = A * A.adjoint() * w;
  return out;
}

double energy_moment(const ManyBodyState& psi,
                     const std::vector<PotentialSpec>& specs,
                     const ScalingParams& scaling, int k) {
  validate_state(psi);
  if (k != 1 && k != 2) throw std::invalid_argument("energy_moment: k must be 1 or 2");
  const double w = psi.grid.measure(psi.N * psi.grid.d);
  Tensor hpsi = apply_hamiltonian(psi, specs, scaling);
  hpsi += psi.values * cplx{static_cast<double>(psi.N), 0.0};
  if (k == 1) return inner(psi.values, hpsi, w).real();
  // (H+N) self-adjoint: <psi,(H+N)^2 psi> = ||(H+N) psi||^2.
  ManyBodyState tmp{psi.grid, psi.N, hpsi};
  double nrm = tmp.values.norm();
  return nrm * nrm * w;
}

double sobolev_product_expectation(const ManyBodyState& psi, int k) {
  validate_state(psi);
  if (k < 1 || static_cast<std::size_t>(k) > psi.N)
    throw std::invalid_argument("sobolev_product_expectation: k out of range");
  std::vector<std::size_t> slots(static_cast<std::size_t>(k));
  for (int j = 0; j < k; ++j) slots[static_cast<std::size_t>(j)] = static_cast<std::size_t>(j);
  // prod_{j<=k} (1 - Lap_j) = sobolev weight with alpha = 2 on those slots.
  Tensor weighted = sobolev_weight(psi.values, psi.grid, 2.0, slots);
  return inner(psi.values, weighted, psi.grid.measure(psi.N * psi.grid.d)).real();
}

double chi_bump(double s) {
  if (s <= 1.0) return 1.0;
  if (s >= 2.0) return 0.0;
  const auto f = [](double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; };
  return f(2.0 - s) / (f(2.0 - s) + f(s - 1.0));
}

Eigen::MatrixXcd dense_hamiltonian(const Grid& g, std::size_t N,
                                   const std::vector<PotentialSpec>& specs,
                                   const ScalingParams& scaling,
                                   std::size_t dense_cap) {
  const auto d = static_cast<std::size_t>(g.d);
  std::size_t dim = 1;
  for (std::size_t a = 0; a < N * d; ++a) {
    dim *= g.n;
    if (dim > dense_cap)
      throw SizeError("dense_hamiltonian: dimension exceeds dense cap (N=" +
                      std::to_string(N) + ", n=" + std::to_string(g.n) +
                      ", d=" + std::to_string(g.d) + ")");
  }
  Eigen::MatrixXcd H(dim, dim);
  ManyBodyState basis{g, N, Tensor(std::vector<std::size_t>(N * d, g.n))};
  for (std::size_t j = 0; j < dim; ++j) {
    for (std::size_t i = 0; i < dim; ++i) basis.values[i] = (i == j) ? 1.0 : 0.0;
    const Tensor col = apply_hamiltonian(basis, specs, scaling);
    for (std::size_t i = 0; i < dim; ++i) H(static_cast<Eigen::Index>(i),
                                            static_cast<Eigen::Index>(j)) = col[i];
  }
  return H;
}

ManyBodyState chi_regularize(const ManyBodyState& psi,
                             const std::vector<PotentialSpec>& specs,
                             const ScalingParams& scaling, double kappa,
                             std::size_t dense_cap) {
  validate_state(psi);
  if (!(kappa > 0.0)) throw std::invalid_argument("chi_regularize: kappa must be positive");
  validate_scaling(scaling, max_p(specs), psi.grid, specs.empty());
  Eigen::MatrixXcd H = dense_hamiltonian(psi.grid, psi.N, specs, scaling, dense_cap);
  H = 0.5 * (H + H.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(H);
  const auto dim = H.rows();
  Eigen::VectorXcd coeffs(dim);
  for (Eigen::Index i = 0; i < dim; ++i) coeffs(i) = psi.values[static_cast<std::size_t>(i)];
  Eigen::VectorXcd modal = solver.eigenvectors().adjoint() * coeffs;
  for (Eigen::Index i = 0; i < dim; ++i)
    modal(i) *= chi_bump(kappa * solver.eigenvalues()(i) / static_cast<double>(psi.N));
  Eigen::VectorXcd cut = solver.eigenvectors() * modal;
  ManyBodyState out{psi.grid, psi.N, Tensor(psi.values.shape())};
  for (Eigen::Index i = 0; i < dim; ++i) out.values[static_cast<std::size_t>(i)] = cut(i);
  const double nrm = mb_norm(out);
  if (nrm == 0.0) throw std::runtime_error("chi_regularize: cutoff annihilated the state");
  out.values *= cplx{1.0 / nrm, 0.0};
  return out;
}

}  // namespace gph
