#include "gph/spectral.hpp"
#include "gph/wavefield.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace gph;

TEST_CASE("zero coefficients reduce to free propagation") {
  const Grid g = make_grid(1, 32, 2.0 * std::numbers::pi);
  const double xi = g.xi[2];
  const double A = 1.0 / std::sqrt(g.L);
  const WaveField pw = plane_wave(g, A, {xi});
  const Trajectory traj = nls_evolve(pw, {{}}, 0.5, 1e-3, 500);
  const Tensor expected = pw.values * std::polar(1.0, -xi * xi * 0.5);
  CHECK((traj.samples.back() - expected).norm() / expected.norm() <= 1e-10);
}

TEST_CASE("plane-wave dispersion omega = xi^2 + sum b_p A^2p") {
  const Grid g = make_grid(1, 64, 2.0 * std::numbers::pi);
  const double xi = g.xi[1];
  const double A = 0.8;
  const NonlinearityCoefficients coeffs{{1.0, 0.5}};
  const WaveField pw = plane_wave(g, A, {xi});
  const Trajectory traj = nls_evolve(pw, coeffs, 1.0, 1e-3, 1000);
  // analytic substitution: |phi| is spatially constant, so the exact solution
  // is A exp(i(xi x - omega t))
  double omega = xi * xi;
  double a2p = 1.0;
  for (double bp : coeffs.b) {
    a2p *= A * A;
    omega += bp * a2p;
  }
  const Tensor expected = pw.values * std::polar(1.0, -omega);
  const double err = (traj.samples.back() - expected).norm() * std::sqrt(g.dx);
  CHECK(err <= 1e-8);
}

TEST_CASE("zero field stays zero") {
  const Grid g = make_grid(1, 16, 4.0);
  WaveField phi{g, Tensor(std::vector<std::size_t>{16})};
  const Trajectory traj = nls_evolve(phi, {{1.0}}, 0.1, 1e-2);
  CHECK(traj.samples.back().norm() == 0.0);
  CHECK(mass(phi) == 0.0);
  CHECK(energy(phi, {{1.0}}) == 0.0);
}

TEST_CASE("normalized plane-wave mass and energy closed forms") {
  const Grid g = make_grid(1, 64, 2.0 * std::numbers::pi);
  const double A = 1.0 / std::sqrt(2.0 * std::numbers::pi);
  const WaveField pw = plane_wave(g, A, {g.xi[1]});
  const NonlinearityCoefficients coeffs{{1.0}};
  CHECK(mass(pw) == doctest::Approx(1.0).epsilon(1e-12));
  // energy = xi^2 * mass + (b1/2) A^4 L = 1 + 1/(4 pi)
  CHECK(energy(pw, coeffs) ==
        doctest::Approx(1.0 + 1.0 / (4.0 * std::numbers::pi)).epsilon(1e-12));
}

TEST_CASE("conservation over T=1 at dt=1e-3 and Strang order") {
  const Grid g = make_grid(1, 256, 8.0);
  const NonlinearityCoefficients coeffs{{1.0, 0.5}};
  const WaveField phi0 = gaussian_packet(g, 0.8, g.L / 2.0);
  const double m0 = mass(phi0);
  const double e0 = energy(phi0, coeffs);

  const Trajectory traj = nls_evolve(phi0, coeffs, 1.0, 1e-3, 1000);
  const WaveField last = traj.at(1);
  CHECK(std::abs(mass(last) - m0) <= 1e-10);
  const double drift = std::abs(energy(last, coeffs) - e0) / std::abs(e0);
  CHECK(drift <= 1e-6);

  const Trajectory half = nls_evolve(phi0, coeffs, 1.0, 5e-4, 2000);
  const double drift_half =
      std::abs(energy(half.at(1), coeffs) - e0) / std::abs(e0);
  CHECK(drift / drift_half == doctest::Approx(4.0).epsilon(0.35));
}

TEST_CASE("evolving T then -T returns the initial state") {
  const Grid g = make_grid(1, 128, 8.0);
  const NonlinearityCoefficients coeffs{{1.0}};
  const WaveField phi0 = gaussian_packet(g, 0.7, g.L / 2.0);
  const Trajectory fwd = nls_evolve(phi0, coeffs, 1.0, 1e-3, 1000);
  const WaveField mid{g, fwd.samples.back()};
  const Trajectory bwd = nls_evolve(mid, coeffs, -1.0, 1e-3, 1000);
  CHECK((bwd.samples.back() - phi0.values).norm() * std::sqrt(g.dx) <= 1e-8);
}

TEST_CASE("nls_evolve input validation") {
  const Grid g = make_grid(1, 16, 4.0);
  const WaveField phi0 = gaussian_packet(g, 0.5, 2.0);
  CHECK_THROWS_AS(nls_evolve(phi0, {{1.0}}, 1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(nls_evolve(phi0, {{1.0}}, 1.0, -0.1), std::invalid_argument);
  CHECK_THROWS_AS(nls_evolve(phi0, {{-1.0}}, 1.0, 0.1), std::invalid_argument);
  WaveField bad = phi0;
  bad.values[0] = cplx{std::nan(""), 0.0};
  CHECK_THROWS_AS(nls_evolve(bad, {{1.0}}, 1.0, 0.1), std::invalid_argument);
  CHECK_THROWS_AS(nls_evolve(phi0, {{1.0}}, 0.35, 0.1), std::invalid_argument);
}
