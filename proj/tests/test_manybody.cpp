#include "gph/experiments.hpp"
#include "gph/manybody.hpp"
#include "gph/spectral.hpp"

#include <doctest.h>

#include <Eigen/Dense>

#include <cmath>
#include <numbers>

using namespace gph;

namespace {

// Dense Hamiltonian assembled independently of the matrix-free operator:
// kinetic part from explicit DFT matrices, potential directly from its
// defining formula. d = 1 only; this is the test oracle.
Eigen::MatrixXcd oracle_hamiltonian(const Grid& g, std::size_t N,
                                    const std::vector<PotentialSpec>& specs,
                                    const ScalingParams& s) {
  const auto n = static_cast<Eigen::Index>(g.n);
  Eigen::MatrixXcd D(n, n);
  for (Eigen::Index m = 0; m < n; ++m)
    for (Eigen::Index x = 0; x < n; ++x)
      D(m, x) = std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(m * x) /
                                    static_cast<double>(g.n));
  Eigen::VectorXd xi2(n);
  for (Eigen::Index m = 0; m < n; ++m) xi2(m) = g.xi[static_cast<std::size_t>(m)] *
                                                g.xi[static_cast<std::size_t>(m)];
  const Eigen::MatrixXcd K1 =
      D.adjoint() * xi2.asDiagonal() * D / static_cast<double>(g.n);

  std::size_t dim = 1;
  for (std::size_t a = 0; a < N; ++a) dim *= g.n;
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim),
                                              static_cast<Eigen::Index>(dim));
  // kinetic: sum over particles of I (x) ... K1 ... (x) I
  for (std::size_t particle = 0; particle < N; ++particle) {
    std::size_t left = 1, right = 1;
    for (std::size_t a = 0; a < particle; ++a) left *= g.n;
    for (std::size_t a = particle + 1; a < N; ++a) right *= g.n;
    for (std::size_t l = 0; l < left; ++l)
      for (std::size_t r = 0; r < right; ++r)
        for (std::size_t i = 0; i < g.n; ++i)
          for (std::size_t j = 0; j < g.n; ++j) {
            const std::size_t row = (l * g.n + i) * right + r;
            const std::size_t col = (l * g.n + j) * right + r;
            H(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) +=
                K1(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
          }
  }
  // potential: diagonal, straight from the formula
  const double nb = std::pow(static_cast<double>(s.N), s.beta);
  for (std::size_t flat = 0; flat < dim; ++flat) {
    std::vector<std::size_t> idx(N);
    std::size_t rest = flat;
    for (std::size_t a = N; a-- > 0;) {
      idx[a] = rest % g.n;
      rest /= g.n;
    }
    double w = 0.0;
    for (const auto& spec : specs) {
      const auto m = static_cast<std::size_t>(spec.p) + 1;
      if (m > N) continue;
      const double amp = std::pow(static_cast<double>(s.N),
                                  static_cast<double>(spec.p) * s.beta -
                                      static_cast<double>(spec.p));
      std::vector<std::size_t> tuple(m);
      for (std::size_t i = 0; i < m; ++i) tuple[i] = i + 1;
      do {
        std::vector<double> y(static_cast<std::size_t>(spec.p));
        for (std::size_t t = 1; t < m; ++t)
          y[t - 1] = nb * min_image(g.coord[idx[tuple[0] - 1]] - g.coord[idx[tuple[t] - 1]],
                                    g.L);
        w += amp * potential_value(spec, 1, y);
      } while (next_combination(tuple, N));
    }
    H(static_cast<Eigen::Index>(flat), static_cast<Eigen::Index>(flat)) += w;
  }
  return H;
}

}  // namespace

TEST_CASE("scaled potential: unscaled identity, integral, permutation") {
  const Grid g = make_grid(1, 16, 8.0);
  const auto spec = make_potential(g, 1, PotentialShape::gaussian, 0.7, 1.3);
  // b0 quadrature vs closed form height*(2 pi w^2)^(1/2)
  const double exact = 1.3 * std::sqrt(2.0 * std::numbers::pi * 0.49);
  CHECK(spec.b0 == doctest::Approx(exact).epsilon(1e-8));

  // beta = 0 diagnostic: field equals unscaled V at grid differences
  const ScalingParams diag{4, 0.0};
  const auto f = scaled_potential_field(spec, diag, g, {1, 3}, 3);
  std::size_t checked = 0;
  for_each_index(std::vector<std::size_t>(3, g.n),
                 [&](std::size_t flat, const std::vector<std::size_t>& idx) {
                   const double y = min_image(g.coord[idx[0]] - g.coord[idx[2]], g.L);
                   const double expect = potential_value(spec, 1, std::vector<double>{y});
                   if (std::abs(f[flat] - expect) > 1e-12) return;
                   ++checked;
                 });
  CHECK(checked == g.n * g.n * g.n);

  // integral over difference coordinates is b0 (change of variables)
  const ScalingParams sc{4, 0.1};
  const auto fs = scaled_potential_field(spec, sc, g, {1, 2}, 2);
  double integral = 0.0;
  for (std::size_t i = 0; i < g.n; ++i) integral += fs[i * g.n + 0];  // x2 fixed
  integral *= g.dx;
  CHECK(integral == doctest::Approx(spec.b0).epsilon(0.01));

  // disjoint tuples related by axis permutation
  const auto fa = scaled_potential_field(spec, sc, g, {1, 2}, 4);
  const auto fb = scaled_potential_field(spec, sc, g, {3, 4}, 4);
  const std::vector<std::size_t> shape(4, g.n);
  Tensor ta(shape);
  for_each_index(shape, [&](std::size_t flat, const std::vector<std::size_t>& idx) {
    const std::size_t permuted = ((idx[2] * g.n + idx[3]) * g.n + idx[0]) * g.n + idx[1];
    ta[flat] = fa[flat] - fb[permuted];
  });
  CHECK(ta.norm() <= 1e-12);

  CHECK_THROWS_AS(scaled_potential_field(spec, sc, g, {2, 1}, 4), std::invalid_argument);
  CHECK_THROWS_AS(scaled_potential_field(spec, sc, g, {1, 5}, 4), std::invalid_argument);
}

TEST_CASE("bump potential is compactly supported and non-negative") {
  const Grid g = make_grid(1, 32, 8.0);
  const auto spec = make_potential(g, 1, PotentialShape::bump, 1.0, 2.0);
  CHECK(potential_value(spec, 1, std::vector<double>{0.0}) == doctest::Approx(2.0));
  CHECK(potential_value(spec, 1, std::vector<double>{1.1}) == 0.0);
  CHECK(spec.b0 > 0.0);
}

TEST_CASE("plane-wave product is a kinetic eigenstate") {
  const Grid g = make_grid(1, 8, 2.0 * std::numbers::pi);
  const double A = 1.0 / std::sqrt(g.L);
  WaveField phi = plane_wave(g, A, {g.xi[1]});
  // product of per-particle plane waves with different modes
  const std::size_t N = 2;
  Tensor t(std::vector<std::size_t>(N, g.n));
  const double xi1 = g.xi[1], xi2 = g.xi[2];
  for_each_index(t.shape(), [&](std::size_t flat, const std::vector<std::size_t>& idx) {
    t[flat] = std::polar(A * A, xi1 * g.coord[idx[0]] + xi2 * g.coord[idx[1]]);
  });
  ManyBodyState psi{g, N, t};
  const Tensor h = apply_hamiltonian(psi, {}, {N, 0.1});
  const double expected = xi1 * xi1 + xi2 * xi2;
  CHECK((h - t * cplx{expected, 0.0}).norm() <= 1e-10 * t.norm() * expected);
}

TEST_CASE("matrix-free Hamiltonian matches the dense assembly oracle") {
  const Grid g = make_grid(1, 8, 8.0);
  const std::size_t N = 2;
  const auto spec = make_potential(g, 1, PotentialShape::gaussian, 1.0, 1.0);
  const ScalingParams sc{N, 0.1};
  const Eigen::MatrixXcd H_prod = dense_hamiltonian(g, N, {spec}, sc);
  const Eigen::MatrixXcd H_oracle = oracle_hamiltonian(g, N, {spec}, sc);
  CHECK((H_prod - H_oracle).cwiseAbs().maxCoeff() <= 1e-12 * H_oracle.cwiseAbs().maxCoeff());
}

TEST_CASE("expectation of H is real and non-negative for V >= 0") {
  const Grid g = make_grid(1, 8, 8.0);
  const std::size_t N = 3;
  const auto spec = make_potential(g, 1, PotentialShape::gaussian, 1.0, 1.0);
  const ScalingParams sc{N, 0.1};
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    const ManyBodyState psi = random_symmetric_state(g, N, seed);
    const cplx e = inner(psi.values, apply_hamiltonian(psi, {spec}, sc),
                         g.measure(N));
    CHECK(std::abs(e.imag()) <= 1e-10 * std::abs(e.real()));
    CHECK(e.real() >= 0.0);
  }
}

TEST_CASE("split-step vs dense matrix-exponential oracle at N=2, n=8") {
  const Grid g = make_grid(1, 8, 8.0);
  const std::size_t N = 2;
  const auto spec = make_potential(g, 1, PotentialShape::gaussian, 1.0, 1.0);
  const ScalingParams sc{N, 0.1};
  const WaveField phi0 = gaussian_packet(g, 0.9, g.L / 2.0);
  const ManyBodyState psi0 = product_state(phi0, N);

  const double T = 0.5, dt = 1e-3;
  const MBTrajectory traj = evolve_manybody(psi0, {spec}, sc, T, dt, 500);

  const Eigen::MatrixXcd H = oracle_hamiltonian(g, N, {spec}, sc);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (H + H.adjoint()));
  Eigen::VectorXcd c0(psi0.values.size());
  for (std::size_t i = 0; i < psi0.values.size(); ++i)
    c0(static_cast<Eigen::Index>(i)) = psi0.values[i];
  Eigen::VectorXcd modal = es.eigenvectors().adjoint() * c0;
  for (Eigen::Index i = 0; i < modal.size(); ++i)
    modal(i) *= std::polar(1.0, -es.eigenvalues()(i) * T);
  const Eigen::VectorXcd exact = es.eigenvectors() * modal;

  double err2 = 0.0;
  for (std::size_t i = 0; i < psi0.values.size(); ++i)
    err2 += std::norm(traj.samples.back()[i] - exact(static_cast<Eigen::Index>(i)));
  CHECK(std::sqrt(err2 * g.measure(N)) <= 1e-6);
}

TEST_CASE("free evolution keeps products of free-evolved factors") {
  const Grid g = make_grid(1, 16, 8.0);
  const std::size_t N = 3;
  const WaveField phi0 = gaussian_packet(g, 0.8, g.L / 2.0);
  const ManyBodyState psi0 = product_state(phi0, N);
  const MBTrajectory traj = evolve_manybody(psi0, {}, {N, 0.1}, 0.2, 1e-2, 20);
  const WaveField phi_t{g, free_propagate(phi0.values, g, 0.2)};
  const ManyBodyState expected = product_state(phi_t, N);
  CHECK((traj.samples.back() - expected.values).norm() <= 1e-10 * expected.values.norm());
}

TEST_CASE("unitarity and symmetry preservation over 1000 steps") {
  const Grid g = make_grid(1, 8, 8.0);
  const std::size_t N = 2;
  const auto spec = make_potential(g, 1, PotentialShape::gaussian, 1.0, 1.0);
  const ScalingParams sc{N, 0.1};
  const ManyBodyState psi0 = product_state(gaussian_packet(g, 0.9, g.L / 2.0), N);
  const MBTrajectory traj = evolve_manybody(psi0, {spec}, sc, 1.0, 1e-3, 1000);
  const ManyBodyState last = traj.at(traj.samples.size() - 1);
  CHECK(std::abs(mb_norm(last) - 1.0) <= 1e-10);
  CHECK(symmetry_defect(last) <= 1e-10);
}

TEST_CASE("memory cap raises a size error naming the configuration") {
  const Grid g = make_grid(1, 16, 8.0);
  const ManyBodyState psi0 = product_state(gaussian_packet(g, 0.8, g.L / 2.0), 3);
  CHECK_THROWS_AS(evolve_manybody(psi0, {}, {3, 0.1}, 0.1, 1e-2, 1, 1024), SizeError);
}

TEST_CASE("marginal of a product state is the rank-one projector") {
  const Grid g = make_grid(1, 12, 8.0);
  const WaveField phi = gaussian_packet(g, 0.8, g.L / 2.0);
  const ManyBodyState psi = product_state(phi, 3);
  const DensityKernel g1 = marginal(psi, 1);
  const DensityKernel proj = factorized_density(phi, 1);
  CHECK(trace_distance(g1, proj) <= 1e-12);
  CHECK(kernel_trace(g1).real() == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("marginals of random symmetric states have unit trace") {
  const Grid g = make_grid(1, 8, 8.0);
  const ManyBodyState psi = random_symmetric_state(g, 3, 17);
  for (std::size_t k : {1u, 2u, 3u}) {
    const DensityKernel gk = marginal(psi, k);
    CHECK(kernel_trace(gk).real() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(hermiticity_defect(gk) <= 1e-10);
  }
}

TEST_CASE("symmetric superposition marginal has eigenvalues 1/2, 1/2") {
  const Grid g = make_grid(1, 16, 8.0);
  // orthogonal unit fields
  const WaveField a = gaussian_packet(g, 0.6, g.L / 2.0);
  WaveField b = gaussian_packet(g, 0.6, g.L / 2.0, g.xi[4]);
  // orthogonalize b against a and renormalize
  const cplx ov = inner(a.values, b.values, g.dx);
  b.values -= a.values * ov;
  b.values *= cplx{1.0 / field_norm(b), 0.0};

  Tensor t(std::vector<std::size_t>{g.n, g.n});
  for_each_index(t.shape(), [&](std::size_t flat, const std::vector<std::size_t>& idx) {
    t[flat] = a.values[idx[0]] * b.values[idx[1]] + b.values[idx[0]] * a.values[idx[1]];
  });
  ManyBodyState psi{g, 2, t};
  psi.values *= cplx{1.0 / mb_norm(psi), 0.0};
  const auto ev = kernel_eigenvalues(marginal(psi, 1));
  // 2x2 diagonalization oracle: the only nonzero eigenvalues are 1/2, 1/2
  REQUIRE(ev.size() >= 2);
  CHECK(ev[ev.size() - 1] == doctest::Approx(0.5).epsilon(1e-8));
  CHECK(ev[ev.size() - 2] == doctest::Approx(0.5).epsilon(1e-8));
}

TEST_CASE("partial trace consistency between kernel levels") {
  const Grid g = make_grid(1, 8, 8.0);
  const ManyBodyState psi = random_symmetric_state(g, 3, 23);
  const DensityKernel g2 = marginal(psi, 2);
  const DensityKernel g1a = kernel_partial_trace(g2);
  const DensityKernel g1b = marginal(psi, 1);
  CHECK((g1a.values - g1b.values).norm() <= 1e-10 * g1b.values.norm());
}

TEST_CASE("Heisenberg consistency of the full density matrix") {
  // centered time difference of gamma_N matches -i[H, gamma] at O(dt^2)
  const Grid g = make_grid(1, 8, 8.0);
  const std::size_t N = 2;
  const auto spec = make_potential(g, 1, PotentialShape::gaussian, 1.0, 1.0);
  const ScalingParams sc{N, 0.1};
  const ManyBodyState psi0 = product_state(gaussian_packet(g, 0.9, g.L / 2.0), N);

  auto heisenberg_residual = [&](double dt) {
    const MBTrajectory traj = evolve_manybody(psi0, {spec}, sc, 4 * dt, dt);
    const DensityKernel gp = marginal(traj.at(1), N);
    const DensityKernel gm = marginal(traj.at(3), N);
    Tensor lhs = gm.values - gp.values;
    lhs *= cplx{0.0, 1.0 / (2.0 * dt)};
    // [H, gamma](x;x') = H_x gamma - (H gamma^dagger)^dagger_x'
    const ManyBodyState mid = traj.at(2);
    const DensityKernel gmid = marginal(mid, N);
    const Eigen::MatrixXcd H = oracle_hamiltonian(g, N, {spec}, sc);
    const std::size_t dim = psi0.values.size();
    Eigen::MatrixXcd G(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
    for (std::size_t r = 0; r < dim; ++r)
      for (std::size_t c = 0; c < dim; ++c)
        G(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
            gmid.values[r * dim + c];
    const Eigen::MatrixXcd comm = H * G - G * H;
    double acc = 0.0;
    for (std::size_t r = 0; r < dim; ++r)
      for (std::size_t c = 0; c < dim; ++c)
        acc += std::norm(lhs[r * dim + c] -
                         comm(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)));
    return std::sqrt(acc);
  };
  const double r1 = heisenberg_residual(2e-3);
  const double r2 = heisenberg_residual(1e-3);
  CHECK(r1 / r2 == doctest::Approx(4.0).epsilon(0.2));
}

TEST_CASE("energy moment identities (Prop 2.1 flavor)") {
  const Grid g = make_grid(1, 8, 8.0);
  const std::size_t N = 3;
  const ManyBodyState psi = random_symmetric_state(g, N, 31);
  const ScalingParams sc{N, 0.1};

  // V = 0, k = 1: <psi,(H+N)psi> = N <psi,(1-Lap_1)psi> exactly
  const double lhs = energy_moment(psi, {}, sc, 1);
  const double rhs = static_cast<double>(N) * sobolev_product_expectation(psi, 1);
  CHECK(std::abs(lhs - rhs) <= 1e-10 * std::abs(rhs));

  // V >= 0: ratio >= 1
  const auto spec = make_potential(g, 1, PotentialShape::gaussian, 1.0, 1.0);
  CHECK(energy_moment(psi, {spec}, sc, 1) / rhs >= 1.0);

  // k = 2: positive ratio across a beta sweep
  for (double beta : {0.1, 0.05}) {
    const double m2 = energy_moment(psi, {spec}, {N, beta}, 2);
    const double s2 = sobolev_product_expectation(psi, 2);
    CHECK(m2 / (static_cast<double>(N * N) * s2) > 0.0);
  }
  CHECK_THROWS_AS(energy_moment(psi, {}, sc, 3), std::invalid_argument);
}

TEST_CASE("chi regularization: identity case, norm, kappa -> 0 limit") {
  const Grid g = make_grid(1, 8, 8.0);
  const std::size_t N = 2;
  const auto spec = make_potential(g, 1, PotentialShape::gaussian, 1.0, 1.0);
  const ScalingParams sc{N, 0.1};
  const ManyBodyState psi0 = product_state(gaussian_packet(g, 0.9, g.L / 2.0), N);

  // kappa small enough that chi = 1 on the occupied spectrum: output = input
  const ManyBodyState same = chi_regularize(psi0, {spec}, sc, 1e-6);
  CHECK((same.values - psi0.values).norm() <= 1e-10 * psi0.values.norm());

  double prev = 2.0;
  for (double kappa : {1.0, 0.5, 0.1}) {
    const ManyBodyState cut = chi_regularize(psi0, {spec}, sc, kappa);
    CHECK(std::abs(mb_norm(cut) - 1.0) <= 1e-12);
    ManyBodyState diff = cut;
    diff.values -= psi0.values;
    const double dist = diff.values.norm() * std::sqrt(g.measure(N));
    CHECK(dist <= prev + 1e-12);  // monotone decrease as kappa shrinks
    prev = dist;
  }
  CHECK_THROWS_AS(chi_regularize(psi0, {spec}, sc, 1.0, 16), SizeError);
}

TEST_CASE("chi bump is 1 on [0,1], 0 on [2,inf), monotone between") {
  CHECK(chi_bump(0.0) == 1.0);
  CHECK(chi_bump(1.0) == 1.0);
  CHECK(chi_bump(2.0) == 0.0);
  CHECK(chi_bump(5.0) == 0.0);
  double prev = 1.0;
  for (double s = 1.0; s <= 2.0; s += 0.05) {
    const double v = chi_bump(s);
    CHECK(v <= prev + 1e-12);
    CHECK(v >= 0.0);
    prev = v;
  }
}

TEST_CASE("trace distance: coincidence, orthogonal states, metric properties") {
  const Grid g = make_grid(1, 12, 8.0);
  const WaveField a = gaussian_packet(g, 0.7, g.L / 2.0);
  WaveField b = gaussian_packet(g, 0.7, g.L / 2.0, g.xi[5]);
  const cplx ov = inner(a.values, b.values, g.dx);
  b.values -= a.values * ov;
  b.values *= cplx{1.0 / field_norm(b), 0.0};
  const WaveField c = gaussian_packet(g, 1.1, g.L / 3.0);

  const DensityKernel ka = factorized_density(a, 1);
  const DensityKernel kb = factorized_density(b, 1);
  const DensityKernel kc = factorized_density(c, 1);

  CHECK(trace_distance(ka, ka) == doctest::Approx(0.0));
  // orthogonal pure states: difference has eigenvalues +-1
  CHECK(trace_distance(ka, kb) == doctest::Approx(2.0).epsilon(1e-10));
  const double ab = trace_distance(ka, kb);
  const double ac = trace_distance(ka, kc);
  const double cb = trace_distance(kc, kb);
  CHECK(ab == doctest::Approx(trace_distance(kb, ka)));
  CHECK(ab <= ac + cb + 1e-12);

  DensityKernel skew = ka;
  skew.values[1] += cplx{0.1, 0.1};  // break Hermiticity
  CHECK_THROWS_AS(trace_distance(skew, kb), std::invalid_argument);
}
