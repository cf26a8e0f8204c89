#include "gph/spectral.hpp"

#include "gph/fft.hpp"

#include <cmath>
#include <stdexcept>

namespace gph {
namespace {

// FFT, multiply each mode by fac(|xi_s|^2 per slot), inverse FFT.
template <class F>
Tensor with_multiplier(const Tensor& f, const Grid& g, F&& fac) {
  const std::size_t m = slot_count(f, g);
  const auto d = static_cast<std::size_t>(g.d);
  Tensor out = f;
  fft_all_axes(out, true);
  std::vector<double> xi2(g.n);
  for (std::size_t i = 0; i < g.n; ++i) xi2[i] = g.xi[i] * g.xi[i];
  std::vector<double> slot(m);
  for_each_index(out.shape(), [&](std::size_t flat, const std::vector<std::size_t>& idx) {
    for (std::size_t s = 0; s < m; ++s) {
      double acc = 0.0;
      for (std::size_t a = 0; a < d; ++a) acc += xi2[idx[s * d + a]];
      slot[s] = acc;
    }
    out[flat] *= fac(slot);
  });
  fft_all_axes(out, false);
  return out;
}

}  // namespace

std::size_t slot_count(const Tensor& f, const Grid& g) {
  const auto d = static_cast<std::size_t>(g.d);
  if (f.rank() == 0 || f.rank() % d != 0)
    throw std::invalid_argument("field rank is not a multiple of the grid dimension");
  for (auto s : f.shape())
    if (s != g.n) throw std::invalid_argument("field axis length does not match grid");
  return f.rank() / d;
}

Tensor laplacian_apply(const Tensor& f, const Grid& g,
                       const std::vector<std::size_t>& slots) {
  const std::size_t m = slot_count(f, g);
  std::vector<bool> active(m, slots.empty());
  for (auto s : slots) {
    if (s >= m) throw std::invalid_argument("laplacian_apply: slot out of range");
    active[s] = true;
  }
  return with_multiplier(f, g, [&](const std::vector<double>& slot) -> cplx {
    double acc = 0.0;
    for (std::size_t s = 0; s < slot.size(); ++s)
      if (active[s]) acc += slot[s];
    return {-acc, 0.0};
  });
}

Tensor free_propagate(const Tensor& f, const Grid& g, double t,
                      const std::vector<int>& signs) {
  const std::size_t m = slot_count(f, g);
  if (signs.size() != m)
    throw std::invalid_argument("free_propagate: one sign per slot required");
  return with_multiplier(f, g, [&](const std::vector<double>& slot) -> cplx {
    double phase = 0.0;
    for (std::size_t s = 0; s < m; ++s) phase += signs[s] * slot[s];
    return std::polar(1.0, -t * phase);
  });
}

Tensor free_propagate(const Tensor& f, const Grid& g, double t) {
  return free_propagate(f, g, t, std::vector<int>(slot_count(f, g), 1));
}

Tensor sobolev_weight(const Tensor& f, const Grid& g, double alpha,
                      const std::vector<std::size_t>& slots) {
  const std::size_t m = slot_count(f, g);
  std::vector<bool> active(m, slots.empty());
  for (auto s : slots) {
    if (s >= m) throw std::invalid_argument("sobolev_weight: slot out of range");
    active[s] = true;
  }
  return with_multiplier(f, g, [&](const std::vector<double>& slot) -> cplx {
    double w = 1.0;
    for (std::size_t s = 0; s < slot.size(); ++s)
      if (active[s]) w *= std::pow(1.0 + slot[s], 0.5 * alpha);
    return {w, 0.0};
  });
}

}  // namespace gph
