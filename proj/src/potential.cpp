#include "gph/potential.hpp"

#include "gph/tensor.hpp"

#include <cmath>
#include <stdexcept>

namespace gph {

double potential_value(const PotentialSpec& spec, int d, std::span<const double> y) {
  if (y.size() != static_cast<std::size_t>(spec.p * d))
    throw std::invalid_argument("potential_value: expected p*d difference components");
  double r2 = 0.0;
  for (double c : y) r2 += c * c;
  switch (spec.shape) {
    case PotentialShape::gaussian:
      return spec.height * std::exp(-r2 / (2.0 * spec.width * spec.width));
    case PotentialShape::bump: {
      const double u2 = r2 / (spec.width * spec.width);
      if (u2 >= 1.0) return 0.0;
      return spec.height * std::exp(1.0 - 1.0 / (1.0 - u2));
    }
  }
  return 0.0;
}

PotentialSpec make_potential(const Grid& g, int p, PotentialShape shape,
                             double width, double height) {
  if (p < 1) throw std::invalid_argument("make_potential: p must be >= 1");
  if (!(width > 0.0) || !(height > 0.0))
    throw std::invalid_argument("make_potential: width and height must be positive");
  PotentialSpec spec{p, shape, width, height, 0.0};
  // b0 by direct quadrature over the pd-dimensional periodic box.
  const auto pd = static_cast<std::size_t>(p * g.d);
  double total = 1.0;
  for (std::size_t a = 0; a < pd; ++a) {
    total *= static_cast<double>(g.n);
    if (total > (1u << 26)) throw std::invalid_argument("make_potential: quadrature grid too large");
  }
  std::vector<double> y(pd);
  double acc = 0.0;
  for_each_index(std::vector<std::size_t>(pd, g.n),
                 [&](std::size_t, const std::vector<std::size_t>& idx) {
                   for (std::size_t a = 0; a < pd; ++a)
                     y[a] = min_image(g.coord[idx[a]], g.L);
                   acc += potential_value(spec, g.d, y);
                 });
  spec.b0 = acc * g.measure(pd);
  if (!(spec.b0 > 0.0) || !std::isfinite(spec.b0))
    throw std::invalid_argument("make_potential: b0 must be positive and finite");
  return spec;
}

void validate_scaling(const ScalingParams& s, int p0, const Grid& g, bool diagnostic) {
  if (s.N < 1) throw std::invalid_argument("ScalingParams: N must be >= 1");
  if (diagnostic) {
    if (s.beta < 0.0) throw std::invalid_argument("ScalingParams: beta must be >= 0");
    return;
  }
  const double beta_max = 1.0 / (2.0 * g.d * p0 + 2.0);
  if (!(s.beta > 0.0) || !(s.beta < beta_max))
    throw std::invalid_argument("ScalingParams: beta outside (0, 1/(2*d*p0+2))");
  if (std::pow(static_cast<double>(s.N), s.beta) * g.dx > 1.0)
    throw std::invalid_argument("ScalingParams: resolution guard N^beta * dx <= 1 violated");
}

std::vector<double> scaled_potential_field(const PotentialSpec& spec,
                                           const ScalingParams& s, const Grid& g,
                                           const std::vector<std::size_t>& tuple,
                                           std::size_t N) {
  validate_scaling(s, spec.p, g, /*diagnostic=*/true);
  if (tuple.size() != static_cast<std::size_t>(spec.p) + 1)
    throw std::invalid_argument("scaled_potential_field: tuple must have p+1 entries");
  for (std::size_t i = 0; i < tuple.size(); ++i) {
    if (tuple[i] < 1 || tuple[i] > N)
      throw std::invalid_argument("scaled_potential_field: tuple entry out of range");
    if (i > 0 && tuple[i] <= tuple[i - 1])
      throw std::invalid_argument("scaled_potential_field: tuple must be strictly increasing");
  }
  const auto d = static_cast<std::size_t>(g.d);
  const double nb = std::pow(static_cast<double>(s.N), s.beta);
  const double amp = std::pow(static_cast<double>(s.N),
                              static_cast<double>(spec.p) * g.d * s.beta);
  const std::vector<std::size_t> shape(N * d, g.n);
  std::size_t sz = 1;
  for (auto v : shape) sz *= v;
  std::vector<double> field(sz);
  std::vector<double> y(static_cast<std::size_t>(spec.p) * d);
  for_each_index(shape, [&](std::size_t flat, const std::vector<std::size_t>& idx) {
    for (int m = 1; m <= spec.p; ++m)
      for (std::size_t a = 0; a < d; ++a) {
        const double diff = g.coord[idx[(tuple[0] - 1) * d + a]] -
                            g.coord[idx[(tuple[m] - 1) * d + a]];
        y[(m - 1) * d + a] = nb * min_image(diff, g.L);
      }
    field[flat] = amp * potential_value(spec, g.d, y);
  });
  return field;
}

std::vector<double> total_potential(const std::vector<PotentialSpec>& specs,
                                    const ScalingParams& s, const Grid& g,
                                    std::size_t N) {
  const auto d = static_cast<std::size_t>(g.d);
  std::size_t sz = 1;
  for (std::size_t a = 0; a < N * d; ++a) sz *= g.n;
  std::vector<double> acc(sz, 0.0);
  for (const auto& spec : specs) {
    const auto tuple_len = static_cast<std::size_t>(spec.p) + 1;
    if (tuple_len > N) continue;  // gamma^(k) = 0 convention for k > N
    const double pref = std::pow(static_cast<double>(s.N), -static_cast<double>(spec.p));
    std::vector<std::size_t> tuple(tuple_len);
    for (std::size_t i = 0; i < tuple_len; ++i) tuple[i] = i + 1;
    do {
      const auto field = scaled_potential_field(spec, s, g, tuple, N);
      for (std::size_t i = 0; i < sz; ++i) acc[i] += pref * field[i];
    } while (next_combination(tuple, N));
  }
  return acc;
}

bool next_combination(std::vector<std::size_t>& tuple, std::size_t N) {
  const std::size_t m = tuple.size();
  std::size_t pos = m;
  while (pos-- > 0) {
    if (tuple[pos] < N - (m - 1 - pos)) {
      ++tuple[pos];
      for (std::size_t q = pos + 1; q < m; ++q) tuple[q] = tuple[q - 1] + 1;
      return true;
    }
    if (pos == 0) break;
  }
  for (std::size_t i = 0; i < m; ++i) tuple[i] = i + 1;
  return false;
}

double scaled_potential_value(const PotentialSpec& spec, const ScalingParams& s,
                              int d, std::span<const double> diffs) {
  const double nb = std::pow(static_cast<double>(s.N), s.beta);
  const double amp = std::pow(static_cast<double>(s.N),
                              static_cast<double>(spec.p) * d * s.beta);
  std::vector<double> y(diffs.size());
  for (std::size_t i = 0; i < diffs.size(); ++i) y[i] = nb * diffs[i];
  return amp * potential_value(spec, d, y);
}

}  // namespace gph
