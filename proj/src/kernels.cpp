#include "gph/kernels.hpp"

#include "gph/spectral.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace gph {
namespace {

using MatrixXc = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

std::size_t pair_side_size(const DensityKernel& gamma) {
  std::size_t m = 1;
  for (std::size_t a = 0; a < gamma.k * gamma.grid.d; ++a) m *= gamma.grid.n;
  return m;
}

Eigen::Map<const MatrixXc> as_matrix(const DensityKernel& gamma) {
  const auto m = static_cast<Eigen::Index>(pair_side_size(gamma));
  return {gamma.values.data(), m, m};
}

}  // namespace

void validate_kernel(const DensityKernel& gamma) {
  if (gamma.k < 1) throw std::invalid_argument("DensityKernel: k must be >= 1");
  if (slot_count(gamma.values, gamma.grid) != 2 * gamma.k)
    throw std::invalid_argument("DensityKernel: tensor must have 2k particle slots");
}

cplx kernel_trace(const DensityKernel& gamma) {
  validate_kernel(gamma);
  const std::size_t m = pair_side_size(gamma);
  const double w = gamma.grid.measure(gamma.k * gamma.grid.d);
  cplx acc{0.0, 0.0};
  for (std::size_t i = 0; i < m; ++i) acc += gamma.values[i * m + i];
  return acc * w;
}

double hermiticity_defect(const DensityKernel& gamma) {
  validate_kernel(gamma);
  const std::size_t m = pair_side_size(gamma);
  double defect = 0.0;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i; j < m; ++j)
      defect = std::max(defect, std::abs(gamma.values[i * m + j] -
                                         std::conj(gamma.values[j * m + i])));
  const double scale = gamma.values.max_abs();
  return scale > 0.0 ? defect / scale : 0.0;
}

DensityKernel hermitian_transpose(const DensityKernel& gamma) {
  validate_kernel(gamma);
  const std::size_t m = pair_side_size(gamma);
  DensityKernel out{gamma.grid, gamma.k, Tensor(gamma.values.shape())};
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      out.values[i * m + j] = std::conj(gamma.values[j * m + i]);
  return out;
}

double kernel_l2_norm(const DensityKernel& gamma) {
  validate_kernel(gamma);
  return gamma.values.norm() *
         std::sqrt(gamma.grid.measure(2 * gamma.k * gamma.grid.d));
}

DensityKernel factorized_density(const WaveField& phi, std::size_t k) {
  if (k < 1) throw std::invalid_argument("factorized_density: k must be >= 1");
  const double nrm = field_norm(phi);
  if (std::abs(nrm - 1.0) > 1e-8)
    throw std::invalid_argument("factorized_density: field is not unit-normalized");
  const auto d = static_cast<std::size_t>(phi.grid.d);
  const std::size_t side = phi.values.size();  // n^d
  DensityKernel out{phi.grid, k, Tensor(std::vector<std::size_t>(2 * k * d, phi.grid.n))};
  // Flat index decomposes into 2k slot indices of size n^d each; the value is
  // the product of phi over unprimed slots and conj phi over primed ones.
  const std::size_t total = out.values.size();
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rest = flat;
    std::size_t divisor = total;
    cplx v{1.0, 0.0};
    for (std::size_t s = 0; s < 2 * k; ++s) {
      divisor /= side;
      const std::size_t slot_idx = rest / divisor;
      rest %= divisor;
      v *= (s < k) ? phi.values[slot_idx] : std::conj(phi.values[slot_idx]);
    }
    out.values[flat] = v;
  }
  return out;
}

DensityKernel kernel_partial_trace(const DensityKernel& gamma) {
  validate_kernel(gamma);
  if (gamma.k < 2)
    throw std::invalid_argument("kernel_partial_trace: need at least two pairs");
  const auto d = static_cast<std::size_t>(gamma.grid.d);
  const std::size_t k = gamma.k;
  DensityKernel out{gamma.grid, k - 1,
                    Tensor(std::vector<std::size_t>(2 * (k - 1) * d, gamma.grid.n))};
  const auto& istr = gamma.values.strides();
  const double w = gamma.grid.measure(d);
  const std::size_t side = [&] {
    std::size_t m = 1;
    for (std::size_t a = 0; a < d; ++a) m *= gamma.grid.n;
    return m;
  }();
  for_each_index(out.values.shape(), [&](std::size_t flat, const std::vector<std::size_t>& idx) {
    // input index: slots 0..k-2 from out, slot k-1 = y, slots k..2k-2 from out,
    // slot 2k-1 = y.
    std::size_t base = 0;
    for (std::size_t s = 0; s < k - 1; ++s)
      for (std::size_t a = 0; a < d; ++a) base += idx[s * d + a] * istr[s * d + a];
    for (std::size_t s = 0; s < k - 1; ++s)
      for (std::size_t a = 0; a < d; ++a)
        base += idx[(k - 1 + s) * d + a] * istr[(k + s) * d + a];
    // stride of the traced diagonal: y moves in both slot k-1 and slot 2k-1.
    cplx acc{0.0, 0.0};
    std::vector<std::size_t> yidx(d, 0);
    for (std::size_t y = 0; y < side; ++y) {
      std::size_t off = 0;
      for (std::size_t a = 0; a < d; ++a)
        off += yidx[a] * (istr[(k - 1) * d + a] + istr[(2 * k - 1) * d + a]);
      acc += gamma.values[base + off];
      for (std::size_t a = d; a-- > 0;) {
        if (++yidx[a] < gamma.grid.n) break;
        yidx[a] = 0;
      }
    }
    out.values[flat] = acc * w;
  });
  return out;
}

DensityKernel contract(const DensityKernel& gamma, std::size_t j, std::size_t p,
                       ContractSign sign) {
  validate_kernel(gamma);
  if (p < 1 || p >= gamma.k)
    throw std::invalid_argument("contract: need 1 <= p <= k_in - 1");
  const std::size_t k = gamma.k - p;
  if (j < 1 || j > k) throw std::invalid_argument("contract: j out of range");
  if (sign == ContractSign::full) {
    DensityKernel out = contract(gamma, j, p, ContractSign::plus);
    out.values -= contract(gamma, j, p, ContractSign::minus).values;
    return out;
  }
  const auto d = static_cast<std::size_t>(gamma.grid.d);
  DensityKernel out{gamma.grid, k, Tensor(std::vector<std::size_t>(2 * k * d, gamma.grid.n))};
  const auto& istr = gamma.values.strides();
  // Collapsed coordinate: x_j for the plus part, x'_j for the minus part.
  const std::size_t src_slot = (sign == ContractSign::plus) ? (j - 1) : (k + j - 1);
  for_each_index(out.values.shape(), [&](std::size_t flat, const std::vector<std::size_t>& idx) {
    std::size_t in = 0;
    for (std::size_t s = 0; s < k; ++s)
      for (std::size_t a = 0; a < d; ++a) in += idx[s * d + a] * istr[s * d + a];
    for (std::size_t s = 0; s < k; ++s)
      for (std::size_t a = 0; a < d; ++a)
        in += idx[(k + s) * d + a] * istr[(gamma.k + s) * d + a];
    for (std::size_t e = 0; e < p; ++e)
      for (std::size_t a = 0; a < d; ++a) {
        const std::size_t c = idx[src_slot * d + a];
        in += c * (istr[(k + e) * d + a] + istr[(gamma.k + k + e) * d + a]);
      }
    out.values[flat] = gamma.values[in];
  });
  return out;
}

DensityKernel kernel_free_propagate(const DensityKernel& gamma, double t) {
  validate_kernel(gamma);
  std::vector<int> signs(2 * gamma.k, 1);
  for (std::size_t s = gamma.k; s < 2 * gamma.k; ++s) signs[s] = -1;
  return {gamma.grid, gamma.k, free_propagate(gamma.values, gamma.grid, t, signs)};
}

double sobolev_norm(const DensityKernel& gamma, double alpha) {
  validate_kernel(gamma);
  if (alpha < 0.0) throw std::invalid_argument("sobolev_norm: alpha must be >= 0");
  if (alpha == 0.0) return kernel_l2_norm(gamma);
  DensityKernel weighted{gamma.grid, gamma.k,
                         sobolev_weight(gamma.values, gamma.grid, alpha)};
  return kernel_l2_norm(weighted);
}

std::vector<double> kernel_eigenvalues(const DensityKernel& gamma) {
  validate_kernel(gamma);
  const std::size_t m = pair_side_size(gamma);
  if (m > 4096) throw std::runtime_error("kernel_eigenvalues: dimension above dense cap");
  const double w = gamma.grid.measure(gamma.k * gamma.grid.d);
  MatrixXc M = as_matrix(gamma) * w;
  MatrixXc H = 0.5 * (M + M.adjoint());
  Eigen::SelfAdjointEigenSolver<MatrixXc> solver(H, Eigen::EigenvaluesOnly);
  const auto& ev = solver.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

double trace_distance(const DensityKernel& a, const DensityKernel& b) {
  validate_kernel(a);
  validate_kernel(b);
  if (!a.values.same_shape(b.values) || a.k != b.k)
    throw std::invalid_argument("trace_distance: kernel shape mismatch");
  if (hermiticity_defect(a) > 1e-8 || hermiticity_defect(b) > 1e-8)
    throw std::invalid_argument("trace_distance: input kernel is not Hermitian");
  DensityKernel diff{a.grid, a.k, a.values - b.values};
  double acc = 0.0;
  for (double ev : kernel_eigenvalues(diff)) acc += std::abs(ev);
  return acc;
}

BoundReport bound_report(const DensityKernel& gamma, std::size_t j, std::size_t p,
                         double alpha) {
  BoundReport rep;
  rep.alpha = alpha;
  rep.rhs = sobolev_norm(gamma, alpha);
  rep.lhs = sobolev_norm(contract(gamma, j, p, ContractSign::full), alpha);
  if (rep.rhs == 0.0 && rep.lhs == 0.0) {
    rep.defined = false;
    rep.ratio = 0.0;
  } else {
    rep.ratio = rep.lhs / rep.rhs;
  }
  return rep;
}

std::vector<double> make_mollifier(const Grid& g, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("make_mollifier: eps must be positive");
  // Gaussian on the torus, normalized on the grid so sum h dx^d = 1.
  const auto d = static_cast<std::size_t>(g.d);
  std::size_t sz = 1;
  for (std::size_t a = 0; a < d; ++a) sz *= g.n;
  std::vector<double> h(sz);
  double acc = 0.0;
  for_each_index(std::vector<std::size_t>(d, g.n),
                 [&](std::size_t flat, const std::vector<std::size_t>& idx) {
                   double r2 = 0.0;
                   for (std::size_t a = 0; a < d; ++a) {
                     const double x = min_image(g.coord[idx[a]], g.L);
                     r2 += x * x;
                   }
                   h[flat] = std::exp(-r2 / (2.0 * eps * eps));
                   acc += h[flat];
                 });
  const double w = g.measure(d);
  for (auto& v : h) v /= acc * w;
  return h;
}

DensityKernel mollified_contract(const DensityKernel& gamma, std::size_t j,
                                 std::size_t p, double eps, ContractSign sign,
                                 const std::vector<double>& h) {
  validate_kernel(gamma);
  if (p < 1 || p >= gamma.k)
    throw std::invalid_argument("mollified_contract: need 1 <= p <= k_in - 1");
  const std::size_t k = gamma.k - p;
  if (j < 1 || j > k) throw std::invalid_argument("mollified_contract: j out of range");
  if (eps < 2.0 * gamma.grid.dx)
    throw std::invalid_argument("mollified_contract: eps below grid resolution (need eps >= 2 dx)");
  const auto d = static_cast<std::size_t>(gamma.grid.d);
  std::size_t side = 1;
  for (std::size_t a = 0; a < d; ++a) side *= gamma.grid.n;
  if (h.size() != side)
    throw std::invalid_argument("mollified_contract: mollifier size mismatch");
  {
    double tot = 0.0;
    for (double v : h) {
      if (v < 0.0) throw std::invalid_argument("mollified_contract: mollifier must be non-negative");
      tot += v;
    }
    if (std::abs(tot * gamma.grid.measure(d) - 1.0) > 1e-8)
      throw std::invalid_argument("mollified_contract: mollifier is not a probability measure");
  }
  if (sign == ContractSign::full) {
    DensityKernel out = mollified_contract(gamma, j, p, eps, ContractSign::plus, h);
    out.values -= mollified_contract(gamma, j, p, eps, ContractSign::minus, h).values;
    return out;
  }
  const std::size_t src_slot = (sign == ContractSign::plus) ? (j - 1) : (k + j - 1);
  const double w = gamma.grid.measure(d);

  // Collapse the extra pairs one at a time: each step integrates one traced
  // coordinate against h_eps(x_collapse - y). Working tensor starts as gamma
  // and loses two slots per extra pair.
  // h is indexed by the grid difference (periodic), so build a lookup
  // h_diff[a][b] = h(x_a - x_b) per flat slot index.
  std::vector<double> hdiff(side * side);
  {
    std::vector<std::size_t> sh(d, gamma.grid.n);
    std::vector<std::vector<std::size_t>> unflat(side, std::vector<std::size_t>(d));
    for_each_index(sh, [&](std::size_t flat, const std::vector<std::size_t>& idx) {
      unflat[flat] = idx;
    });
    for (std::size_t a = 0; a < side; ++a)
      for (std::size_t b = 0; b < side; ++b) {
        std::size_t diff_flat = 0;
        for (std::size_t c = 0; c < d; ++c) {
          const std::size_t delta =
              (unflat[a][c] + gamma.grid.n - unflat[b][c]) % gamma.grid.n;
          diff_flat = diff_flat * gamma.grid.n + delta;
        }
        hdiff[a * side + b] = h[diff_flat];
      }
  }

  Tensor work = gamma.values;
  std::size_t pairs = gamma.k;
  for (std::size_t e = 0; e < p; ++e) {
    // Integrate the last pair (y, y') of the current tensor against
    // h(x_src - y) h(x_src - y').
    const std::size_t out_pairs = pairs - 1;
    Tensor next(std::vector<std::size_t>(2 * out_pairs * d, gamma.grid.n));
    const auto& istr = work.strides();
    for_each_index(next.shape(), [&](std::size_t flat, const std::vector<std::size_t>& idx) {
      std::size_t base = 0;
      for (std::size_t s = 0; s < out_pairs; ++s)
        for (std::size_t a = 0; a < d; ++a) base += idx[s * d + a] * istr[s * d + a];
      for (std::size_t s = 0; s < out_pairs; ++s)
        for (std::size_t a = 0; a < d; ++a)
          base += idx[(out_pairs + s) * d + a] * istr[(pairs + s) * d + a];
      std::size_t src_flat = 0;
      for (std::size_t a = 0; a < d; ++a)
        src_flat = src_flat * gamma.grid.n + idx[src_slot * d + a];
      // strides of y (slot pairs-1) and y' (slot 2*pairs-1) as flat slot moves
      cplx acc{0.0, 0.0};
      for (std::size_t y = 0; y < side; ++y) {
        std::size_t yoff = 0;
        {
          std::size_t rest = y;
          for (std::size_t a = d; a-- > 0;) {
            yoff += (rest % gamma.grid.n) * istr[(pairs - 1) * d + a];
            rest /= gamma.grid.n;
          }
        }
        const double hy = hdiff[src_flat * side + y];
        if (hy == 0.0) continue;
        cplx inner_acc{0.0, 0.0};
        for (std::size_t yp = 0; yp < side; ++yp) {
          std::size_t ypoff = 0;
          std::size_t rest = yp;
          for (std::size_t a = d; a-- > 0;) {
            ypoff += (rest % gamma.grid.n) * istr[(2 * pairs - 1) * d + a];
            rest /= gamma.grid.n;
          }
          inner_acc += hdiff[src_flat * side + yp] * work[base + yoff + ypoff];
        }
        acc += hy * inner_acc;
      }
      next[flat] = acc * w * w;
    });
    work = std::move(next);
    --pairs;
  }
  return {gamma.grid, k, std::move(work)};
}

DensityKernel mollified_contract(const DensityKernel& gamma, std::size_t j,
                                 std::size_t p, double eps, ContractSign sign) {
  return mollified_contract(gamma, j, p, eps, sign, make_mollifier(gamma.grid, eps));
}

double mollifier_rate(const DensityKernel& gamma, const DensityKernel& observable,
                      std::size_t j, std::size_t p,
                      const std::vector<double>& eps_list) {
  validate_kernel(observable);
  if (eps_list.size() < 2)
    throw std::invalid_argument("mollifier_rate: need at least two eps values");
  for (std::size_t i = 1; i < eps_list.size(); ++i)
    if (!(eps_list[i] < eps_list[i - 1]))
      throw std::invalid_argument("mollifier_rate: eps list must be decreasing");
  const DensityKernel sharp = contract(gamma, j, p, ContractSign::plus);
  if (observable.k != sharp.k)
    throw std::invalid_argument("mollifier_rate: observable level mismatch");
  const std::size_t m = [&] {
    std::size_t s = 1;
    for (std::size_t a = 0; a < sharp.k * sharp.grid.d; ++a) s *= sharp.grid.n;
    return s;
  }();
  const double w = gamma.grid.measure(2 * sharp.k * sharp.grid.d);
  auto trace_against = [&](const DensityKernel& kernel) {
    // Tr(J K) = sum_{x,w} J(x;w) K(w;x) dx^(2kd)
    cplx acc{0.0, 0.0};
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = 0; b < m; ++b)
        acc += observable.values[a * m + b] * kernel.values[b * m + a];
    return acc * w;
  };
  std::vector<double> logs_eps, logs_err;
  for (double eps : eps_list) {
    const DensityKernel molly = mollified_contract(gamma, j, p, eps, ContractSign::plus);
    const double err = std::abs(trace_against(molly) - trace_against(sharp));
    if (err <= 0.0)
      throw std::runtime_error("mollifier_rate: zero error, rate undefined");
    logs_eps.push_back(std::log(eps));
    logs_err.push_back(std::log(err));
  }
  // least-squares slope
  const auto nn = static_cast<double>(logs_eps.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < logs_eps.size(); ++i) {
    sx += logs_eps[i];
    sy += logs_err[i];
    sxx += logs_eps[i] * logs_eps[i];
    sxy += logs_eps[i] * logs_err[i];
  }
  return (nn * sxy - sx * sy) / (nn * sxx - sx * sx);
}

}  // namespace gph
