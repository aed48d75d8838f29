#pragma once

#include "liftrom/cli/config.hpp"
#include "liftrom/dynamics/ode_model.hpp"
#include "liftrom/reduction/projection.hpp"

#include <filesystem>
#include <functional>
#include <memory>
#include <nlohmann/json.hpp>
#include <string>
#include <vector>

namespace liftrom::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitNumerical = 2;

/// Runs `body`, logs any error and maps it to an exit code: configuration,
/// rank, budget, dimension and I/O problems give 1; integration failures,
/// domain violations and failed checks give 2.
int run_guarded(const std::function<int()>& body);

/// Integrates the configured form and writes trajectory.csv and manifest.json.
void cmd_simulate(const RunConfig& cfg, const std::filesystem::path& out);
/// FOM snapshots, POD bases and reduced operators: basis.json, rom.json,
/// sigma_<var>.csv and manifest.json.
void cmd_reduce(const RunConfig& cfg, const std::filesystem::path& out);
/// As cmd_reduce, then integrates the ROM rebuilt from the written artifacts:
/// rom_trajectory.csv (reduced coordinates) and rom_lifted.csv (original variables).
void cmd_simulate_rom(const RunConfig& cfg, const std::filesystem::path& out);
/// errors.csv, timings.csv, qoi_<label>.csv, sigma_<var>.csv, summary.json, manifest.json.
void cmd_experiment(const std::string& name, const RunConfig& cfg, const std::filesystem::path& out);
/// Runs the invariant suite, prints one line per check and writes verify.csv
/// when `out` is not empty. Returns the number of failed checks.
int cmd_verify(std::uint64_t seed, const std::filesystem::path& out);

/// A reduced model rebuilt from rom.json and basis.json.
struct LoadedRom {
  std::unique_ptr<OdeModel> model;
  ProjectionBasis lift;  ///< maps reduced states to the lifted variables of the form
  Vector x0;
  std::string kind;
};
LoadedRom load_rom(const std::filesystem::path& dir, const RunConfig& cfg);

/// Names of the variables a form integrates (the original ones first).
std::vector<std::string> original_variables(ModelKind model);

}  // namespace liftrom::cli
