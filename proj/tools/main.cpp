#include "liftrom/cli/commands.hpp"
#include "liftrom/cli/config.hpp"
#include "liftrom/errors.hpp"
#include "liftrom/log.hpp"

#include <CLI11.hpp>
#include <omp.h>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

namespace {

using namespace liftrom::cli;

liftrom::cli::ModelKind model_from_name(const std::string& name) {
  if (name == "fhn") return ModelKind::FHN;
  if (name == "tubular") return ModelKind::Tubular;
  throw liftrom::ConfigError("unknown experiment '" + name + "' (expected fhn or tubular)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lifting-based reduced-order models for nonlinear PDE discretizations"};
  app.require_subcommand(1);

  std::string config;
  std::string out = "out";
  int threads = 0;
  std::string experiment;
  std::uint64_t seed = 0;

  auto add_common = [&](CLI::App* sub, bool config_required) {
    auto* opt = sub->add_option("--config", config, "TOML or JSON run configuration");
    if (config_required) opt->required();
    sub->add_option("--out", out, "output directory")->capture_default_str();
    sub->add_option("--threads", threads, "OpenMP thread count (0 keeps the runtime default)")
        ->check(CLI::NonNegativeNumber);
  };

  auto* simulate = app.add_subcommand("simulate", "integrate the full-order model in the configured form");
  add_common(simulate, true);
  auto* reduce = app.add_subcommand("reduce", "build POD bases and reduced operators");
  add_common(reduce, true);
  auto* simulate_rom = app.add_subcommand("simulate-rom", "reduce, then integrate the reduced model");
  add_common(simulate_rom, true);
  auto* exp = app.add_subcommand("experiment", "run the error sweep of a model study");
  exp->add_option("name", experiment, "fhn or tubular")->required();
  add_common(exp, false);
  auto* verify = app.add_subcommand("verify", "run the invariant checks");
  add_common(verify, false);
  verify->add_option("--seed", seed, "seed for random test states")->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  return run_guarded([&]() -> int {
    liftrom::init_logging_from_env();
    if (threads > 0) omp_set_num_threads(threads);
    const std::filesystem::path out_dir(out);
    if (*verify) {
      std::optional<RunConfig> cfg;
      if (!config.empty()) cfg = load_config(config);
      const std::uint64_t s = verify->count("--seed") > 0 || !cfg ? seed : cfg->seed;
      std::filesystem::create_directories(out_dir);
      return cmd_verify(s, out_dir) == 0 ? kExitOk : kExitNumerical;
    }
    if (*exp) {
      const RunConfig cfg = config.empty() ? default_config(model_from_name(experiment)) : load_config(config);
      cmd_experiment(experiment, cfg, out_dir);
      return kExitOk;
    }
    const RunConfig cfg = load_config(config);
    if (*simulate) cmd_simulate(cfg, out_dir);
    if (*reduce) cmd_reduce(cfg, out_dir);
    if (*simulate_rom) cmd_simulate_rom(cfg, out_dir);
    return kExitOk;
  });
}
