#pragma once

#include "liftrom/bench/experiments.hpp"
#include "liftrom/dynamics/integrator.hpp"
#include "liftrom/models/fhn.hpp"
#include "liftrom/models/tubular.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <nlohmann/json.hpp>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace liftrom::cli {

enum class ModelKind { FHN, Tubular };
enum class Form { Fom, LiftedQB, Quartic, QBDAE };
enum class Method { None, Pod, PodDeim };

std::string to_string(ModelKind m);
std::string to_string(Form f);
std::string to_string(Method m);

struct ReductionConfig {
  Method method = Method::None;
  /// Modes per variable unless listed in `ranks` or `modes`.
  Index r = 0;
  std::map<std::string, Index> ranks;
  /// 0-based mode indices (the config file lists them 1-based).
  std::map<std::string, std::vector<Index>> modes;
  /// Variables kept unreduced (QB-DAE constrained states only).
  std::vector<std::string> identity;
  Index r_deim = 0;
  /// Snapshot window: grid points after the initial state.
  std::optional<Index> training;
  std::optional<double> training_end;
  Index max_rank = 40;
  bool allow_large = false;
  std::uint64_t substitution_budget = std::uint64_t{1} << 30;
};

struct SweepConfig {
  std::optional<Index> training;
  std::optional<double> training_end;
  std::vector<Index> qb_ranks, deim_ranks, r_deim, quartic_ranks, qbdae_r1, qbdae_r2, pod_ranks;
  std::optional<bool> r_deim_equal_r;
  std::optional<Index> qoi_rank, qoi_r1, qoi_r2;
};

/// Everything a CLI run needs. Unset optional values fall back to the
/// model's defaults; `normalized` holds the effective values and is what the
/// manifest records and hashes.
struct RunConfig {
  std::uint64_t seed = 0;
  ModelKind model = ModelKind::FHN;
  Form form = Form::Fom;
  Index snapshots = 0;
  FHNConfig fhn;
  TubularConfig tubular;
  std::optional<std::string> psi0_profile, theta0_profile;
  IntegratorOptions integrator;
  ReductionConfig reduction;
  SweepConfig experiment;
  nlohmann::json normalized;

  double t_f() const { return model == ModelKind::FHN ? fhn.t_f : tubular.t_f; }
  /// Grid points used for bases (defaults: 100 for FHN, up to t = 20 for the reactor).
  Index training_count(const std::vector<double>& grid) const;
};

/// Parses TOML (.toml) or JSON (.json); every other extension is tried as
/// TOML. Unknown keys, wrong value types and invalid combinations raise
/// ConfigError naming the key.
RunConfig load_config(const std::filesystem::path& path);
RunConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
/// Defaults for a model with no file at all.
RunConfig default_config(ModelKind model);

/// 64-bit FNV-1a of a byte string, as 16 lowercase hex digits.
std::string fnv1a_hex(std::string_view bytes);
/// Hash of the normalized configuration.
std::string config_hash(const RunConfig& cfg);

FHNExperimentConfig fhn_experiment_config(const RunConfig& cfg);
TubularExperimentConfig tubular_experiment_config(const RunConfig& cfg);

}  // namespace liftrom::cli
