#include "gph/experiments.hpp"

#include "gph/io.hpp"
#include "gph/residuals.hpp"
#include "gph/spectral.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace gph {
namespace {

PotentialShape parse_shape(const std::string& s) {
  if (s == "gaussian") return PotentialShape::gaussian;
  if (s == "bump") return PotentialShape::bump;
  throw std::invalid_argument("potential shape must be 'gaussian' or 'bump'");
}

std::vector<ScanRow> scan_one_N(const ScanConfig& c, const Grid& g,
                                const std::vector<PotentialSpec>& specs,
                                std::size_t N) {
  const WaveField phi0 = gaussian_packet(g, c.packet_sigma, g.L / 2.0);
  ManyBodyState psi0 = product_state(phi0, N);
  const ScalingParams scaling{N, c.beta};
  std::size_t dim = 1;
  for (std::size_t a = 0; a < N * static_cast<std::size_t>(g.d); ++a) dim *= g.n;
  if (c.kappa > 0.0 && dim <= 4096)
    psi0 = chi_regularize(psi0, specs, scaling, c.kappa);

  const MBTrajectory mb = evolve_manybody(psi0, specs, scaling, c.T, c.dt, c.stride);
  NonlinearityCoefficients coeffs;
  for (const auto& s : specs) {
    if (coeffs.b.size() < static_cast<std::size_t>(s.p)) coeffs.b.resize(s.p, 0.0);
    coeffs.b[s.p - 1] += s.b0;
  }
  const Trajectory nls = nls_evolve(phi0, coeffs, c.T, c.dt, c.stride);

  const double mass0 = mass(phi0);
  const double energy0 = energy(phi0, coeffs);
  std::vector<ScanRow> rows;
  for (std::size_t s = 0; s < mb.samples.size(); ++s) {
    const double t = static_cast<double>(s) * mb.sample_dt();
    const WaveField phi_t = nls.at(s);
    const double mdrift = std::abs(mass(phi_t) - mass0);
    const double edrift = std::abs(energy(phi_t, coeffs) - energy0);
    for (std::size_t k : c.k_list) {
      if (k > N) continue;
      const DensityKernel gk = marginal(mb.at(s), k);
      const DensityKernel fk = factorized_density(phi_t, k);
      rows.push_back({N, c.beta, t, k, trace_distance(gk, fk), mdrift, edrift});
    }
  }
  return rows;
}

std::filesystem::path checkpoint_path(const ScanConfig& c, std::size_t N) {
  return std::filesystem::path(c.out_dir) / "checkpoints" /
         ("scan_N" + std::to_string(N) + ".csv");
}

std::vector<std::string> row_cells(const ScanRow& r) {
  return {std::to_string(r.N),          CsvWriter::num(r.beta),
          CsvWriter::num(r.t),          std::to_string(r.k),
          CsvWriter::num(r.trace_distance), CsvWriter::num(r.mass_drift),
          CsvWriter::num(r.energy_drift)};
}

const std::vector<std::string> kScanHeader = {
    "N", "beta", "t", "k", "trace_distance", "mass_drift", "energy_drift"};

std::vector<ScanRow> load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path);
  std::vector<ScanRow> rows;
  std::string line;
  std::getline(in, line);  // header
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (cells.size() != 7) throw std::runtime_error("corrupt checkpoint: " + path.string());
    rows.push_back({std::stoul(cells[0]), std::stod(cells[1]), std::stod(cells[2]),
                    std::stoul(cells[3]), std::stod(cells[4]), std::stod(cells[5]),
                    std::stod(cells[6])});
  }
  return rows;
}

}  // namespace

nlohmann::json scan_config_to_json(const ScanConfig& c) {
  nlohmann::json pots = nlohmann::json::array();
  for (const auto& p : c.potentials)
    pots.push_back({{"p", p.p}, {"shape", p.shape}, {"width", p.width}, {"height", p.height}});
  return {{"d", c.d},         {"n", c.n},       {"L", c.L},
          {"potentials", pots}, {"beta", c.beta}, {"N", c.N_list},
          {"T", c.T},         {"dt", c.dt},     {"stride", c.stride},
          {"k", c.k_list},    {"kappa", c.kappa}, {"sigma0", c.packet_sigma},
          {"seed", c.seed},   {"out", c.out_dir}};
}

ScanConfig scan_config_from_json(const nlohmann::json& j) {
  require_keys(j, {"d", "n", "L", "potentials", "beta", "N", "T", "dt", "stride",
                   "k", "kappa", "sigma0", "seed", "out"},
               "scan config");
  ScanConfig c;
  if (j.contains("d")) c.d = j.at("d").get<int>();
  if (j.contains("n")) c.n = j.at("n").get<std::size_t>();
  if (j.contains("L")) c.L = j.at("L").get<double>();
  if (j.contains("potentials")) {
    c.potentials.clear();
    for (const auto& p : j.at("potentials")) {
      require_keys(p, {"p", "shape", "width", "height"}, "potential config");
      PotentialConfig pc;
      if (p.contains("p")) pc.p = p.at("p").get<int>();
      if (p.contains("shape")) pc.shape = p.at("shape").get<std::string>();
      if (p.contains("width")) pc.width = p.at("width").get<double>();
      if (p.contains("height")) pc.height = p.at("height").get<double>();
      parse_shape(pc.shape);
      c.potentials.push_back(pc);
    }
  }
  if (j.contains("beta")) c.beta = j.at("beta").get<double>();
  if (j.contains("N")) c.N_list = j.at("N").get<std::vector<std::size_t>>();
  if (j.contains("T")) c.T = j.at("T").get<double>();
  if (j.contains("dt")) c.dt = j.at("dt").get<double>();
  if (j.contains("stride")) c.stride = j.at("stride").get<std::size_t>();
  if (j.contains("k")) c.k_list = j.at("k").get<std::vector<std::size_t>>();
  if (j.contains("kappa")) c.kappa = j.at("kappa").get<double>();
  if (j.contains("sigma0")) c.packet_sigma = j.at("sigma0").get<double>();
  if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("out")) c.out_dir = j.at("out").get<std::string>();
  return c;
}

std::vector<PotentialSpec> build_potentials(const ScanConfig& c, const Grid& g) {
  std::vector<PotentialSpec> specs;
  for (const auto& p : c.potentials)
    specs.push_back(make_potential(g, p.p, parse_shape(p.shape), p.width, p.height));
  return specs;
}

std::vector<ScanRow> convergence_scan(const ScanConfig& c, std::size_t jobs) {
  const Grid g = make_grid(c.d, c.n, c.L);
  const auto specs = build_potentials(c, g);
  int p0 = 1;
  for (const auto& s : specs) p0 = std::max(p0, s.p);
  // validate every scan point before any compute
  for (std::size_t N : c.N_list) {
    std::size_t dim = 1;
    for (std::size_t a = 0; a < N * static_cast<std::size_t>(g.d); ++a) dim *= g.n;
    if (dim > kDefaultMemoryCap)
      throw SizeError("convergence_scan: N=" + std::to_string(N) + " exceeds memory cap");
    if (!specs.empty()) validate_scaling({N, c.beta}, p0, g);
  }

  const std::filesystem::path out(c.out_dir);
  std::filesystem::create_directories(out / "checkpoints");
  const nlohmann::json manifest = scan_config_to_json(c);
  save_json(out / "scan_manifest.json", manifest);

  std::vector<std::vector<ScanRow>> per_n(c.N_list.size());
  std::vector<std::size_t> todo;
  for (std::size_t i = 0; i < c.N_list.size(); ++i) {
    const auto ck = checkpoint_path(c, c.N_list[i]);
    if (std::filesystem::exists(ck)) {
      per_n[i] = load_checkpoint(ck);
      continue;
    }
    todo.push_back(i);
  }

  const std::size_t workers = std::max<std::size_t>(1, std::min(jobs, todo.size()));
  std::vector<std::thread> pool;
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    while (true) {
      const std::size_t slot = next.fetch_add(1);
      if (slot >= todo.size()) break;
      const std::size_t i = todo[slot];
      per_n[i] = scan_one_N(c, g, specs, c.N_list[i]);
      CsvWriter ck(checkpoint_path(c, c.N_list[i]), kScanHeader);
      for (const auto& r : per_n[i]) ck.row(row_cells(r));
    }
  };
  if (workers == 1) {
    work();
  } else {
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }

  std::vector<ScanRow> rows;
  for (const auto& block : per_n) rows.insert(rows.end(), block.begin(), block.end());
  CsvWriter csv(out / "scan.csv", kScanHeader);
  for (const auto& r : rows) csv.row(row_cells(r));
  return rows;
}

ResidualSuiteReport residual_suite(const ScanConfig& c) {
  ResidualSuiteReport rep;
  // GP residual: factorized trajectories on a fine grid.
  {
    const Grid g = make_grid(1, 64, 10.0);
    const NonlinearityCoefficients coeffs{{1.0, 0.5}};
    const NonlinearityCoefficients zero{{}};
    const WaveField packet = gaussian_packet(g, c.packet_sigma, g.L / 2.0);
    {
      const double a = 1.0 / std::sqrt(g.L);
      const WaveField pw = plane_wave(g, a, {g.xi[1]});
      const Trajectory traj = nls_evolve(pw, zero, 4e-3, 1e-3);
      rep.gp_free = gp_residual(traj, 1, zero, 2);
    }
    {
      const Trajectory traj = nls_evolve(packet, coeffs, 4e-3, 1e-3);
      rep.gp_at_dt = gp_residual(traj, 1, coeffs, 2);
      const Trajectory half = nls_evolve(packet, coeffs, 2e-3, 5e-4);
      rep.gp_at_half_dt = gp_residual(half, 1, coeffs, 2);
      rep.gp_ratio = rep.gp_at_dt / rep.gp_at_half_dt;
    }
  }
  // BBGKY residual at N = 3, k = 1, p0 = 1, n = 8.
  {
    const Grid g = make_grid(1, 8, 6.0);
    const WaveField phi0 = gaussian_packet(g, 0.55, g.L / 2.0);
    const ManyBodyState psi0 = product_state(phi0, 3);
    const ScalingParams scaling{3, c.beta};
    const auto specs = build_potentials(c, g);
    {
      const MBTrajectory traj = evolve_manybody(psi0, {}, scaling, 4e-3, 1e-3);
      rep.bbgky_free = bbgky_residual(traj, {}, scaling, 1, 2);
    }
    {
      const MBTrajectory traj = evolve_manybody(psi0, specs, scaling, 4e-3, 1e-3);
      rep.bbgky_at_dt = bbgky_residual(traj, specs, scaling, 1, 2);
      const MBTrajectory half = evolve_manybody(psi0, specs, scaling, 2e-3, 5e-4);
      rep.bbgky_at_half_dt = bbgky_residual(half, specs, scaling, 1, 2);
      rep.bbgky_ratio = rep.bbgky_at_dt / rep.bbgky_at_half_dt;
    }
  }
  return rep;
}

ManyBodyState random_symmetric_state(const Grid& g, std::size_t N, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const auto d = static_cast<std::size_t>(g.d);
  Tensor raw(std::vector<std::size_t>(N * d, g.n));
  for (std::size_t i = 0; i < raw.size(); ++i) raw[i] = cplx{gauss(rng), gauss(rng)};
  // smooth it slightly so Sobolev quantities stay moderate
  raw = sobolev_weight(raw, g, -4.0);
  // symmetrize over adjacent transpositions until the defect settles
  ManyBodyState psi{g, N, raw};
  std::vector<std::size_t> swapped(raw.rank());
  for (std::size_t round = 0; round < N; ++round) {
    for (std::size_t s = 0; s + 1 < N; ++s) {
      Tensor sym(psi.values.shape());
      for_each_index(psi.values.shape(), [&](std::size_t flat, const std::vector<std::size_t>& idx) {
        for (std::size_t a = 0; a < swapped.size(); ++a) swapped[a] = idx[a];
        for (std::size_t a = 0; a < d; ++a) std::swap(swapped[s * d + a], swapped[(s + 1) * d + a]);
        sym[flat] = 0.5 * (psi.values[flat] + psi.values[psi.values.flat_index(swapped)]);
      });
      psi.values = std::move(sym);
    }
  }
  const double nrm = mb_norm(psi);
  psi.values *= cplx{1.0 / nrm, 0.0};
  return psi;
}

BoundSuiteReport bound_suite(const ScanConfig& c) {
  BoundSuiteReport rep;
  const Grid g = make_grid(1, 16, 10.0);
  const auto specs = build_potentials(c, g);
  const std::size_t N = 3;
  const ManyBodyState psi = random_symmetric_state(g, N, c.seed);
  for (double beta : {c.beta, 0.5 * c.beta, 0.25 * c.beta}) {
    Prop21Row row;
    row.beta = beta;
    const ScalingParams scaling{N, beta};
    const double s1 = sobolev_product_expectation(psi, 1);
    const double s2 = sobolev_product_expectation(psi, 2);
    row.ratio_k1_v0 = energy_moment(psi, {}, scaling, 1) / (static_cast<double>(N) * s1);
    row.ratio_k1 = energy_moment(psi, specs, scaling, 1) / (static_cast<double>(N) * s1);
    row.ratio_k2 = energy_moment(psi, specs, scaling, 2) /
                   (static_cast<double>(N) * static_cast<double>(N) * s2);
    rep.prop21.push_back(row);
  }
  // Theorem 3.2 style battery: factorized kernels from assorted smooth fields.
  {
    const Grid gk = make_grid(1, 16, 10.0);
    std::vector<WaveField> battery = {
        gaussian_packet(gk, 0.6, gk.L / 2.0),
        gaussian_packet(gk, 1.0, gk.L / 2.0),
        gaussian_packet(gk, 0.8, gk.L / 3.0, gk.xi[1]),
    };
    for (const auto& phi : battery) {
      const DensityKernel g2 = factorized_density(phi, 2);
      rep.thm32.push_back(bound_report(g2, 1, 1, 1.0));
    }
    const Grid g8 = make_grid(1, 8, 10.0);
    const WaveField small = gaussian_packet(g8, 0.8, g8.L / 2.0);
    const DensityKernel g3 = factorized_density(small, 3);
    rep.thm32.push_back(bound_report(g3, 1, 2, 1.0));
    // Sobolev-norm invariance under free evolution.
    const DensityKernel base = factorized_density(small, 1);
    const double before = sobolev_norm(base, 1.0);
    const double after = sobolev_norm(kernel_free_propagate(base, 0.37), 1.0);
    rep.sobolev_invariance = std::abs(after - before) / before;
  }
  return rep;
}

}  // namespace gph
