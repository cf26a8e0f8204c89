#include "gph/residuals.hpp"

#include "gph/spectral.hpp"

#include <cmath>
#include <stdexcept>

namespace gph {
namespace {

// Laplacian commutator sum_i (-Lap_{x_i} + Lap_{x'_i}) gamma.
Tensor free_commutator(const DensityKernel& gamma) {
  std::vector<std::size_t> unprimed(gamma.k), primed(gamma.k);
  for (std::size_t s = 0; s < gamma.k; ++s) {
    unprimed[s] = s;
    primed[s] = gamma.k + s;
  }
  Tensor out = laplacian_apply(gamma.values, gamma.grid, unprimed);
  out *= cplx{-1.0, 0.0};
  out += laplacian_apply(gamma.values, gamma.grid, primed);
  return out;
}

}  // namespace

DensityKernel gp_contraction_term(const WaveField& phi, std::size_t k,
                                  const NonlinearityCoefficients& coeffs,
                                  double b_sign) {
  const DensityKernel gamma = factorized_density(phi, k);
  const auto d = static_cast<std::size_t>(phi.grid.d);
  const std::size_t side = phi.values.size();
  DensityKernel out{phi.grid, k, Tensor(gamma.values.shape())};
  // |phi|^{2p} lookup per grid point and power p
  std::vector<std::vector<double>> pow_abs(coeffs.b.size(), std::vector<double>(side));
  for (std::size_t i = 0; i < side; ++i) {
    const double a = std::norm(phi.values[i]);
    double ap = 1.0;
    for (std::size_t p = 0; p < coeffs.b.size(); ++p) {
      ap *= a;
      pow_abs[p][i] = ap;
    }
  }
  const std::size_t total = gamma.values.size();
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rest = flat;
    std::size_t divisor = total;
    double factor = 0.0;
    for (std::size_t s = 0; s < 2 * k; ++s) {
      divisor /= side;
      const std::size_t slot_idx = rest / divisor;
      rest %= divisor;
      for (std::size_t p = 0; p < coeffs.b.size(); ++p) {
        if (s < k)
          factor += coeffs.b[p] * pow_abs[p][slot_idx];
        else
          factor -= coeffs.b[p] * pow_abs[p][slot_idx];
      }
    }
    out.values[flat] = b_sign * factor * gamma.values[flat];
  }
  (void)d;
  return out;
}

double gp_residual(const Trajectory& traj, std::size_t k,
                   const NonlinearityCoefficients& coeffs, std::size_t t_index,
                   double b_sign) {
  if (t_index == 0 || t_index + 1 >= traj.samples.size())
    throw std::invalid_argument("gp_residual: need samples at t_index -/+ 1");
  const double dt = traj.sample_dt();
  const WaveField prev = traj.at(t_index - 1);
  const WaveField mid = traj.at(t_index);
  const WaveField next = traj.at(t_index + 1);

  const DensityKernel gp = factorized_density(prev, k);
  const DensityKernel gn = factorized_density(next, k);
  Tensor lhs = gn.values - gp.values;
  lhs *= cplx{0.0, 1.0 / (2.0 * dt)};  // i * centered difference

  const DensityKernel gm = factorized_density(mid, k);
  Tensor rhs = free_commutator(gm);
  rhs += gp_contraction_term(mid, k, coeffs, b_sign).values;

  DensityKernel res{traj.grid, k, lhs - rhs};
  return kernel_l2_norm(res);
}

double bbgky_prefactor(std::size_t N, std::size_t k, int p, int m) {
  double num = 1.0;
  for (int t = 0; t < m; ++t)
    num *= static_cast<double>(N) - static_cast<double>(k) - static_cast<double>(t);
  return num / std::pow(static_cast<double>(N), p);
}

DensityKernel bbgky_rhs(const std::vector<DensityKernel>& marginals,
                        const std::vector<PotentialSpec>& specs,
                        const ScalingParams& scaling, std::size_t k) {
  if (marginals.empty()) throw std::invalid_argument("bbgky_rhs: missing marginals");
  for (std::size_t i = 0; i < marginals.size(); ++i) {
    validate_kernel(marginals[i]);
    if (marginals[i].k != k + i)
      throw std::invalid_argument("bbgky_rhs: marginals must be consecutive levels k, k+1, ...");
  }
  const DensityKernel& g0 = marginals[0];
  const Grid& grid = g0.grid;
  const auto d = static_cast<std::size_t>(grid.d);
  const std::size_t N = scaling.N;

  DensityKernel out{grid, k, free_commutator(g0)};

  std::vector<double> diffs;
  for (const auto& spec : specs) {
    const auto p = static_cast<std::size_t>(spec.p);
    diffs.resize(p * d);
    // m = 0: interactions entirely inside the first k particles.
    if (p + 1 <= k) {
      const double pref = bbgky_prefactor(N, k, spec.p, 0);
      std::vector<std::size_t> tuple(p + 1);
      for (std::size_t i = 0; i <= p; ++i) tuple[i] = i + 1;
      do {
        for_each_index(g0.values.shape(), [&](std::size_t flat, const std::vector<std::size_t>& idx) {
          auto eval = [&](std::size_t slot_base) {
            for (std::size_t t = 1; t <= p; ++t)
              for (std::size_t a = 0; a < d; ++a)
                diffs[(t - 1) * d + a] = min_image(
                    grid.coord[idx[(slot_base + tuple[0] - 1) * d + a]] -
                        grid.coord[idx[(slot_base + tuple[t] - 1) * d + a]],
                    grid.L);
            return scaled_potential_value(spec, scaling, grid.d, diffs);
          };
          const double wdiff = eval(0) - eval(k);
          out.values[flat] += pref * wdiff * g0.values[flat];
        });
      } while (next_combination(tuple, k));
    }
    // m = 1..p: interactions reaching m traced particles; they use gamma^(k+m).
    for (std::size_t m = 1; m <= p; ++m) {
      if (m >= marginals.size()) continue;  // gamma^(k+m) = 0 for k+m > N
      if (p + 1 - m > k) continue;
      const DensityKernel& gm = marginals[m];
      const double pref = bbgky_prefactor(N, k, spec.p, static_cast<int>(m));
      if (pref == 0.0) continue;
      const double w = grid.measure(m * d);
      const std::size_t untraced = p + 1 - m;
      std::size_t side_m = 1;
      for (std::size_t a = 0; a < m * d; ++a) side_m *= grid.n;
      const auto& istr = gm.values.strides();
      std::vector<std::size_t> tuple(untraced);
      for (std::size_t i = 0; i < untraced; ++i) tuple[i] = i + 1;
      do {
        for_each_index(out.values.shape(), [&](std::size_t flat, const std::vector<std::size_t>& idx) {
          // base offset of gamma^(k+m)(x, .; x', .) from the level-k index
          std::size_t base = 0;
          for (std::size_t s = 0; s < k; ++s)
            for (std::size_t a = 0; a < d; ++a) {
              base += idx[s * d + a] * istr[s * d + a];
              base += idx[(k + s) * d + a] * istr[(k + m + s) * d + a];
            }
          cplx acc{0.0, 0.0};
          std::vector<std::size_t> yidx(m * d, 0);
          for (std::size_t y = 0; y < side_m; ++y) {
            std::size_t off = 0;
            for (std::size_t a = 0; a < m * d; ++a)
              off += yidx[a] * (istr[k * d + a] + istr[(2 * k + m) * d + a]);
            auto eval = [&](std::size_t slot_base) {
              for (std::size_t t = 1; t < untraced; ++t)
                for (std::size_t a = 0; a < d; ++a)
                  diffs[(t - 1) * d + a] = min_image(
                      grid.coord[idx[(slot_base + tuple[0] - 1) * d + a]] -
                          grid.coord[idx[(slot_base + tuple[t] - 1) * d + a]],
                      grid.L);
              for (std::size_t t = 0; t < m; ++t)
                for (std::size_t a = 0; a < d; ++a)
                  diffs[(untraced - 1 + t) * d + a] = min_image(
                      grid.coord[idx[(slot_base + tuple[0] - 1) * d + a]] -
                          grid.coord[yidx[t * d + a]],
                      grid.L);
              return scaled_potential_value(spec, scaling, grid.d, diffs);
            };
            acc += (eval(0) - eval(k)) * gm.values[base + off];
            for (std::size_t a = m * d; a-- > 0;) {
              if (++yidx[a] < grid.n) break;
              yidx[a] = 0;
            }
          }
          out.values[flat] += pref * w * acc;
        });
      } while (next_combination(tuple, k));
    }
  }
  return out;
}

double bbgky_residual(const MBTrajectory& traj,
                      const std::vector<PotentialSpec>& specs,
                      const ScalingParams& scaling, std::size_t k,
                      std::size_t t_index) {
  if (t_index == 0 || t_index + 1 >= traj.samples.size())
    throw std::invalid_argument("bbgky_residual: need samples at t_index -/+ 1");
  int p0 = 0;
  for (const auto& s : specs) p0 = std::max(p0, s.p);
  const double dt = traj.sample_dt();

  const DensityKernel gp = marginal(traj.at(t_index - 1), k);
  const DensityKernel gn = marginal(traj.at(t_index + 1), k);
  Tensor lhs = gn.values - gp.values;
  lhs *= cplx{0.0, 1.0 / (2.0 * dt)};

  std::vector<DensityKernel> levels;
  const ManyBodyState mid = traj.at(t_index);
  for (std::size_t m = 0; m <= static_cast<std::size_t>(p0) && k + m <= traj.N; ++m)
    levels.push_back(marginal(mid, k + m));
  const DensityKernel rhs = bbgky_rhs(levels, specs, scaling, k);

  DensityKernel res{traj.grid, k, lhs - rhs.values};
  return kernel_l2_norm(res);
}

}  // namespace gph
