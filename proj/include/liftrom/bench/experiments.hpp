#pragma once

#include "liftrom/bench/metrics.hpp"
#include "liftrom/dynamics/general_system.hpp"
#include "liftrom/dynamics/integrator.hpp"
#include "liftrom/dynamics/systems.hpp"
#include "liftrom/models/fhn.hpp"
#include "liftrom/models/tubular.hpp"
#include "liftrom/reduction/pod.hpp"
#include "liftrom/reduction/reduced_systems.hpp"
#include "liftrom/reduction/snapshots.hpp"

#include <filesystem>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace liftrom {

/// Basis sizes below are per variable; reported dimensions are totals.
struct FHNExperimentConfig {
  FHNConfig model;
  IntegratorOptions integrator;
  Index snapshots = 150;  ///< output grid t_i = i t_f / snapshots
  Index training = 100;   ///< grid points used for bases, after the initial state
  std::vector<Index> qb_ranks = {1, 2, 3, 4, 5, 6, 8, 10, 12, 15, 20, 25, 30, 35};
  std::vector<Index> deim_ranks = {1, 2, 3, 4, 5, 6, 8, 10, 12, 15, 20, 25, 30, 35};
  std::vector<Index> r_deim = {5, 10, 20};
  bool r_deim_equal_r = true;
  Index qoi_rank = 3;
};

struct TubularExperimentConfig {
  TubularConfig model;
  IntegratorOptions integrator;
  Index snapshots = 3000;
  double training_end = 20.0;
  std::vector<Index> quartic_ranks = {1, 2, 3, 4, 5, 6, 7, 8};
  std::vector<Index> qbdae_r1 = {2, 3, 4, 5, 6, 7, 8};
  /// r2 per variable; 0 stands for V2 = I.
  std::vector<Index> qbdae_r2 = {4, 5, 6, 0};
  std::vector<Index> deim_ranks = {2, 4, 6, 8, 10, 12, 14, 16, 18, 20};
  std::vector<Index> r_deim = {10, 14, 16, 20};
  bool r_deim_equal_r = true;
  std::vector<Index> pod_ranks = {2, 4, 6, 8, 10, 12, 14, 16, 18, 20};
  /// The QoI comparison point (per variable).
  Index qoi_r1 = 6;
  Index qoi_r2 = 3;
  std::uint64_t substitution_budget = std::uint64_t{1} << 30;
};

struct ExperimentResult {
  std::vector<ErrorRow> rows;
  std::vector<QoISeries> qoi;
  std::vector<std::pair<std::string, Vector>> sigma;
  nlohmann::json summary;
};

/// Shared offline data of the FHN study.
struct FHNContext {
  FHNExperimentConfig cfg;
  GeneralNonlinearSystem fom;
  QBSystem lifted;
  std::vector<double> grid;
  Trajectory fom_traj;
  PODBasis lifted_pod;  ///< v, w, z modes from the training window
  Matrix g_snapshots;
  Matrix g_basis;  ///< left singular vectors of g_snapshots up to numerical rank
  Vector g_sigma;
  double fom_seconds = 0.0;
};

FHNContext prepare_fhn(const FHNExperimentConfig& cfg);
/// QB-POD with r modes for each of v, w, z; the lifted ROM trajectory (v, w) is
/// returned through `rom` when requested.
ErrorRow run_fhn_qb_pod(const FHNContext& ctx, Index r, Trajectory* rom = nullptr);
ErrorRow run_fhn_pod_deim(const FHNContext& ctx, Index r, Index r_deim);
ExperimentResult run_fhn_experiment(const FHNExperimentConfig& cfg);

/// Shared offline data of the tubular study.
struct TubularContext {
  TubularExperimentConfig cfg;
  GeneralNonlinearSystem fom;
  QuarticSystem quartic;
  QBSystem qbdae;
  std::vector<double> grid;
  Trajectory fom_traj;
  Index training = 0;
  PODBasis lifted_pod;  ///< psi, theta, w1..w6 modes
  Matrix g_snapshots;
  Matrix g_basis;  ///< left singular vectors of g_snapshots up to numerical rank
  Vector g_sigma;
  double fom_seconds = 0.0;
};

TubularContext prepare_tubular(const TubularExperimentConfig& cfg);
ErrorRow run_tubular_quartic(const TubularContext& ctx, Index r);
/// r2 = 0 uses V2 = I.
ErrorRow run_tubular_qbdae(const TubularContext& ctx, Index r1, Index r2,
                           Trajectory* rom = nullptr);
ErrorRow run_tubular_pod_deim(const TubularContext& ctx, Index r, Index r_deim);
ErrorRow run_tubular_pod(const TubularContext& ctx, Index r);
ExperimentResult run_tubular_experiment(const TubularExperimentConfig& cfg);

/// errors.csv, timings.csv, qoi_*.csv, sigma_*.csv and summary.json.
void write_experiment(const ExperimentResult& result, const std::filesystem::path& dir);

}  // namespace liftrom
