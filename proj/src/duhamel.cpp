#include "gph/duhamel.hpp"

#include "gph/spectral.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gph {
namespace {

// Gauss-Legendre nodes and weights on [0, t].
void gauss_legendre(std::size_t q, double t, std::vector<double>& nodes,
                    std::vector<double>& weights) {
  nodes.resize(q);
  weights.resize(q);
  for (std::size_t i = 0; i < q; ++i) {
    // Newton iteration from the Chebyshev-based initial guess.
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(q) + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (std::size_t m = 2; m <= q; ++m) {
        const double pm = ((2.0 * m - 1.0) * x * p1 - (m - 1.0) * p0) / static_cast<double>(m);
        p0 = p1;
        p1 = pm;
      }
      dp = static_cast<double>(q) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[q - 1 - i] = 0.5 * t * (x + 1.0);
    weights[q - 1 - i] = t / ((1.0 - x * x) * dp * dp);
  }
}

}  // namespace

FieldSampler free_sampler(const WaveField& phi0) {
  return [phi0](double s) { return free_propagate(phi0.values, phi0.grid, s); };
}

DensityKernel duhamel_integral(const Grid& g, const TaggedConfiguration& config,
                               const FieldSampler& phi, double t_top,
                               std::size_t nodes_per_axis) {
  const auto& pseq = config.map.pseq;
  const std::size_t n = pseq.n();
  const std::size_t k = pseq.k;
  const std::size_t top_level = k + static_cast<std::size_t>(pseq.Q[n]);
  {
    double sz = 1.0;
    for (std::size_t a = 0; a < 2 * top_level * g.d; ++a) sz *= static_cast<double>(g.n);
    if (sz > static_cast<double>(std::size_t{1} << 24))
      throw std::runtime_error("duhamel_integral: level-(k+Q_n) kernel exceeds size cap");
  }
  if (nodes_per_axis < 2)
    throw std::invalid_argument("duhamel_integral: need at least two nodes per axis");
  if (!(t_top > 0.0)) throw std::invalid_argument("duhamel_integral: t_top must be positive");

  std::vector<double> nodes, weights;
  gauss_legendre(nodes_per_axis, t_top, nodes, weights);

  // The factorized level-(k+Q_n) kernel and its first contraction depend only
  // on the innermost time, so cache per 1-D node.
  std::vector<DensityKernel> innermost;
  innermost.reserve(nodes_per_axis);
  for (std::size_t i = 0; i < nodes_per_axis; ++i) {
    WaveField f{g, phi(nodes[i])};
    const DensityKernel full = factorized_density(f, top_level);
    innermost.push_back(contract(full, static_cast<std::size_t>(config.map.rows[n - 1]),
                                 static_cast<std::size_t>(pseq.p[n - 1]),
                                 ContractSign::full));
  }

  const auto d = static_cast<std::size_t>(g.d);
  DensityKernel acc{g, k, Tensor(std::vector<std::size_t>(2 * k * d, g.n))};

  std::vector<std::size_t> tup(n, 0);
  while (true) {
    // order-simplex indicator along the sigma chain (ties included)
    double prev = t_top;
    bool inside = true;
    for (std::size_t pos = 0; pos < n; ++pos) {
      const double v = nodes[tup[static_cast<std::size_t>(config.sigma[pos]) - 1]];
      if (v > prev) {
        inside = false;
        break;
      }
      prev = v;
    }
    if (inside) {
      double weight = 1.0;
      for (std::size_t m = 0; m < n; ++m) weight *= weights[tup[m]];
      auto time_of = [&](std::size_t label) {  // t_m, with t_0 = t_top
        return label == 0 ? t_top : nodes[tup[label - 1]];
      };
      DensityKernel cur = innermost[tup[n - 1]];
      cur = kernel_free_propagate(cur, time_of(n - 1) - time_of(n));
      for (std::size_t m = n - 1; m >= 1; --m) {
        cur = contract(cur, static_cast<std::size_t>(config.map.rows[m - 1]),
                       static_cast<std::size_t>(pseq.p[m - 1]), ContractSign::full);
        cur = kernel_free_propagate(cur, time_of(m - 1) - time_of(m));
      }
      acc.values += cur.values * cplx{weight, 0.0};
    }
    std::size_t a = n;
    bool done = true;
    while (a-- > 0) {
      if (++tup[a] < nodes_per_axis) {
        done = false;
        break;
      }
      tup[a] = 0;
      if (a == 0) break;
    }
    if (done) break;
  }
  return acc;
}

double verify_move_invariance(const Grid& g, const TaggedConfiguration& a,
                              const TaggedConfiguration& b,
                              const FieldSampler& phi, double t_top,
                              std::size_t nodes_per_axis) {
  if (a.map.pseq.k != b.map.pseq.k || a.map.pseq.p != b.map.pseq.p)
    throw std::invalid_argument("verify_move_invariance: configurations must share a p-sequence");
  const DensityKernel ia = duhamel_integral(g, a, phi, t_top, nodes_per_axis);
  const DensityKernel ib = duhamel_integral(g, b, phi, t_top, nodes_per_axis);
  DensityKernel diff{ia.grid, ia.k, ia.values - ib.values};
  return kernel_l2_norm(diff) / std::max(kernel_l2_norm(ia), 1e-30);
}

}  // namespace gph
