#include "gph/fft.hpp"
#include "gph/grid.hpp"
#include "gph/spectral.hpp"
#include "gph/wavefield.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

using namespace gph;

namespace {

Tensor random_field(const Grid& g, std::size_t slots, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Tensor t(std::vector<std::size_t>(slots * g.d, g.n));
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = cplx{gauss(rng), gauss(rng)};
  return t;
}

}  // namespace

TEST_CASE("make_grid wavenumbers and spacing") {
  const Grid g = make_grid(1, 8, 2.0 * std::numbers::pi);
  CHECK(g.dx == doctest::Approx(std::numbers::pi / 4.0));
  CHECK(g.dx * static_cast<double>(g.n) == doctest::Approx(g.L));
  // multiset of squared wavenumbers for n=8, L=2pi: {0,1,1,4,4,9,9,16}
  std::vector<double> xi2;
  for (double x : g.xi) xi2.push_back(x * x);
  std::sort(xi2.begin(), xi2.end());
  const std::vector<double> expected = {0, 1, 1, 4, 4, 9, 9, 16};
  REQUIRE(xi2.size() == expected.size());
  for (std::size_t i = 0; i < xi2.size(); ++i) CHECK(xi2[i] == doctest::Approx(expected[i]));
  int zeros = 0;
  for (double x : g.xi) zeros += (x == 0.0);
  CHECK(zeros == 1);
}

TEST_CASE("make_grid n=4 L=1 wavenumbers up to ordering") {
  const Grid g = make_grid(1, 4, 1.0);
  std::vector<double> xi = g.xi;
  std::sort(xi.begin(), xi.end());
  const double tp = 2.0 * std::numbers::pi;
  // {0, 2pi, -4pi, -2pi} up to ordering (Nyquist sign immaterial)
  CHECK(xi[0] == doctest::Approx(-2.0 * tp));
  CHECK(xi[1] == doctest::Approx(-tp));
  CHECK(xi[2] == doctest::Approx(0.0));
  CHECK(xi[3] == doctest::Approx(tp));
}

TEST_CASE("make_grid d=2 has 64 points for n=8") {
  const Grid g = make_grid(2, 8, 2.0 * std::numbers::pi);
  CHECK(g.d == 2);
  CHECK(g.n * g.n == 64);
}

TEST_CASE("make_grid rejects bad input") {
  CHECK_THROWS_AS(make_grid(3, 8, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(1, 7, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(1, 2, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(1, 8, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(make_grid(1, 8, -1.0), std::invalid_argument);
}

TEST_CASE("forward-then-inverse transform is the identity") {
  const Grid g = make_grid(1, 16, 3.0);
  Tensor t = random_field(g, 2, 7);
  const Tensor orig = t;
  fft_all_axes(t, true);
  fft_all_axes(t, false);
  CHECK((t - orig).norm() / orig.norm() <= 1e-12);
}

TEST_CASE("mixed-radix grid (n=12) round-trips too") {
  const Grid g = make_grid(1, 12, 8.0);
  Tensor t = random_field(g, 1, 3);
  const Tensor orig = t;
  fft_all_axes(t, true);
  fft_all_axes(t, false);
  CHECK((t - orig).norm() / orig.norm() <= 1e-12);
}

TEST_CASE("laplacian on a plane wave is -xi^2") {
  const Grid g = make_grid(1, 8, 2.0 * std::numbers::pi);
  const double xi = g.xi[2];
  const WaveField f = plane_wave(g, 1.0, {xi});
  const Tensor lap = laplacian_apply(f.values, g);
  const Tensor expected = f.values * cplx{-xi * xi, 0.0};
  CHECK((lap - expected).norm() <= 1e-12 * f.values.norm() * xi * xi);
}

TEST_CASE("laplacian of a constant vanishes") {
  const Grid g = make_grid(1, 8, 5.0);
  Tensor t(std::vector<std::size_t>{8});
  for (std::size_t i = 0; i < 8; ++i) t[i] = cplx{2.5, -1.0};
  CHECK(laplacian_apply(t, g).norm() <= 1e-12 * t.norm());
}

TEST_CASE("laplacian matches the second-difference stencil at O(dx^2)") {
  // oracle: (f(x+dx) - 2 f(x) + f(x-dx)) / dx^2 on a smooth band-limited field
  auto stencil_error = [](std::size_t n) {
    const Grid g = make_grid(1, n, 2.0 * std::numbers::pi);
    Tensor t(std::vector<std::size_t>{n});
    for (std::size_t i = 0; i < n; ++i) {
      const double x = g.coord[i];
      t[i] = cplx{std::sin(x) + 0.3 * std::cos(2.0 * x), 0.2 * std::sin(2.0 * x)};
    }
    const Tensor lap = laplacian_apply(t, g);
    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const cplx fd = (t[(i + 1) % n] + t[(i + n - 1) % n] - 2.0 * t[i]) / (g.dx * g.dx);
      err = std::max(err, std::abs(lap[i] - fd));
    }
    return err;
  };
  const double e1 = stencil_error(32);
  const double e2 = stencil_error(64);
  CHECK(e2 < e1);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.1));  // second-order stencil error
}

TEST_CASE("free propagation: identity at t=0, plane-wave phase, group law") {
  const Grid g = make_grid(1, 16, 2.0 * std::numbers::pi);
  const double xi = g.xi[3];
  const WaveField f = plane_wave(g, 0.7, {xi});

  const Tensor id = free_propagate(f.values, g, 0.0);
  CHECK((id - f.values).norm() <= 1e-14 * f.values.norm());

  const double t = 0.31;
  const Tensor prop = free_propagate(f.values, g, t);
  const Tensor expected = f.values * std::polar(1.0, -xi * xi * t);
  CHECK((prop - expected).norm() <= 1e-12 * f.values.norm());

  Tensor r = random_field(g, 2, 11);
  const Tensor two_step =
      free_propagate(free_propagate(r, g, 0.2, {1, -1}), g, 0.11, {1, -1});
  const Tensor one_step = free_propagate(r, g, 0.31, {1, -1});
  CHECK((two_step - one_step).norm() / r.norm() <= 1e-12);
}

TEST_CASE("free propagation preserves the l2 norm") {
  const Grid g = make_grid(2, 8, 4.0);
  Tensor r = random_field(g, 1, 5);
  for (double t : {1e-3, 0.1, 2.7}) {
    const Tensor p = free_propagate(r, g, t);
    CHECK(std::abs(p.norm() - r.norm()) / r.norm() <= 1e-12);
  }
}

TEST_CASE("laplacian is Hermitian on random fields") {
  const Grid g = make_grid(1, 16, 3.0);
  const Tensor f = random_field(g, 1, 21);
  const Tensor h = random_field(g, 1, 22);
  const cplx lhs = inner(f, laplacian_apply(h, g), g.dx);
  const cplx rhs = inner(laplacian_apply(f, g), h, g.dx);
  CHECK(std::abs(lhs - rhs) <= 1e-12 * std::abs(lhs));
}
