#pragma once

#include "gph/kernels.hpp"
#include "gph/manybody.hpp"
#include "gph/potential.hpp"
#include "gph/wavefield.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace gph {

struct PotentialConfig {
  int p = 1;
  std::string shape = "gaussian";  // gaussian | bump
  double width = 1.0;
  double height = 1.0;
};

/// Configuration of the convergence scan and the bundled suites.
struct ScanConfig {
  int d = 1;
  std::size_t n = 12;
  double L = 10.0;
  std::vector<PotentialConfig> potentials;
  double beta = 0.1;
  std::vector<std::size_t> N_list = {2, 3, 4};
  double T = 0.3;
  double dt = 1e-3;
  std::size_t stride = 100;
  std::vector<std::size_t> k_list = {1};
  double kappa = 0.0;  // 0 disables chi regularization
  double packet_sigma = 0.7;
  std::uint64_t seed = 1;
  std::string out_dir = "out";
};

nlohmann::json scan_config_to_json(const ScanConfig& c);
ScanConfig scan_config_from_json(const nlohmann::json& j);  // strict keys

std::vector<PotentialSpec> build_potentials(const ScanConfig& c, const Grid& g);

struct ScanRow {
  std::size_t N = 0;
  double beta = 0.0;
  double t = 0.0;
  std::size_t k = 0;
  double trace_distance = 0.0;
  double mass_drift = 0.0;
  double energy_drift = 0.0;
};

/// Theorem-1.1 proxy: for each N builds phi^(tensor N), evolves it, extracts
/// gamma^(k) at each sample, evolves phi under the NLS with the b0 of the
/// specs, and records Tr|gamma^(k) - |phi><phi|^k|. Writes
/// <out>/scan.csv (schema N,beta,t,k,trace_distance,mass_drift,energy_drift),
/// a JSON manifest, and per-N checkpoints that make re-runs no-ops.
std::vector<ScanRow> convergence_scan(const ScanConfig& c, std::size_t jobs = 1);

struct ResidualSuiteReport {
  double gp_free = 0.0;          // plane-wave, zero coefficients
  double gp_at_dt = 0.0;
  double gp_at_half_dt = 0.0;
  double gp_ratio = 0.0;         // ~4 for second order
  double bbgky_free = 0.0;
  double bbgky_at_dt = 0.0;
  double bbgky_at_half_dt = 0.0;
  double bbgky_ratio = 0.0;
};

ResidualSuiteReport residual_suite(const ScanConfig& c);

struct Prop21Row {
  double beta = 0.0;
  double ratio_k1_v0 = 0.0;   // exactly 1
  double ratio_k1 = 0.0;      // >= 1 for V >= 0
  double ratio_k2 = 0.0;      // reported, positivity asserted
};

struct BoundSuiteReport {
  std::vector<Prop21Row> prop21;
  std::vector<BoundReport> thm32;  // battery of test kernels
  double sobolev_invariance = 0.0; // norm change under free evolution
};

BoundSuiteReport bound_suite(const ScanConfig& c);

/// Random bosonic-symmetric unit state (deterministic in the seed).
ManyBodyState random_symmetric_state(const Grid& g, std::size_t N, std::uint64_t seed);

}  // namespace gph
