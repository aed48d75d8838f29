#include "liftrom/cli/commands.hpp"

#include "liftrom/bench/experiments.hpp"
#include "liftrom/bench/metrics.hpp"
#include "liftrom/dynamics/polynomial_system.hpp"
#include "liftrom/dynamics/qbdae_solver.hpp"
#include "liftrom/errors.hpp"
#include "liftrom/reduction/deim.hpp"
#include "liftrom/reduction/pod.hpp"
#include "liftrom/reduction/reduced_systems.hpp"
#include "liftrom/reduction/rom_io.hpp"
#include "liftrom/reduction/snapshots.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <fstream>
#include <sstream>

namespace liftrom::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr const char* kVersion = "0.1.0";

std::string read_text(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  if (!is) throw ConfigError("cannot read " + p.string());
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

void write_text(const fs::path& p, const std::string& text) {
  std::ofstream os(p, std::ios::binary);
  if (!os) throw ConfigError("cannot write " + p.string());
  os << text;
  if (!os) throw ConfigError("failed writing " + p.string());
}

void write_json(const fs::path& p, const json& j) { write_text(p, j.dump(1) + "\n"); }

void prepare_out(const fs::path& out) {
  if (out.empty()) throw ConfigError("an output directory is required (--out)");
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec || !fs::is_directory(out)) {
    throw ConfigError("cannot create output directory " + out.string() +
                      (ec ? ": " + ec.message() : std::string()));
  }
}

/// Manifest shared by all commands: the normalized config, its hash and the
/// FNV-1a digest of every listed artifact.
void write_manifest(const fs::path& out, const std::string& command, const RunConfig& cfg,
                    json details, const std::vector<std::string>& artifacts,
                    const std::vector<std::string>& run_dependent = {}) {
  json files = json::array();
  for (const auto& name : artifacts) {
    files.push_back({{"file", name}, {"fnv1a", fnv1a_hex(read_text(out / name))}});
  }
  for (const auto& name : run_dependent) files.push_back({{"file", name}, {"fnv1a", nullptr}});
  json m = {{"command", command},
            {"version", kVersion},
            {"config_hash", config_hash(cfg)},
            {"config", cfg.normalized},
            {"details", std::move(details)},
            {"artifacts", std::move(files)}};
  write_json(out / "manifest.json", m);
}

InputSignal model_input(ModelKind m) { return m == ModelKind::FHN ? fhn_input() : tubular_input(); }

GeneralNonlinearSystem build_fom(const RunConfig& cfg) {
  return cfg.model == ModelKind::FHN ? build_fhn_fom(cfg.fhn) : build_tubular_fom(cfg.tubular);
}

Vector fom_initial_state(const RunConfig& cfg, const GeneralNonlinearSystem& fom) {
  return cfg.model == ModelKind::FHN ? Vector(Vector::Zero(fom.dim())) : tubular_initial_state(cfg.tubular);
}

/// Lifting map from the FOM state to the state of the configured form.
struct FormLift {
  Layout layout;
  std::function<Vector(const Vector&)> map;
};

FormLift form_lift(const RunConfig& cfg, const GeneralNonlinearSystem& fom) {
  if (cfg.form == Form::Fom) return {fom.layout, [](const Vector& x) { return x; }};
  if (cfg.model == ModelKind::FHN) {
    const Index n = cfg.fhn.n;
    return {Layout::uniform({"v", "w", "z"}, n),
            [n](const Vector& x) { return fhn_lift_ic(x.head(n), x.tail(n)); }};
  }
  const Index n = cfg.tubular.n;
  const double gamma = cfg.tubular.gamma;
  if (cfg.form == Form::Quartic) {
    return {Layout::uniform({"psi", "theta", "w1", "w2", "w3"}, n),
            [n, gamma](const Vector& x) { return tubular_quartic_ic(x.head(n), x.tail(n), gamma); }};
  }
  return {Layout::uniform({"psi", "theta", "w1", "w2", "w3", "w4", "w5", "w6"}, n),
          [n, gamma](const Vector& x) { return tubular_qbdae_ic(x.head(n), x.tail(n), gamma); }};
}

Trajectory simulate_fom(const RunConfig& cfg, const GeneralNonlinearSystem& fom,
                        const std::vector<double>& grid, IntegratorStats* stats = nullptr) {
  const GeneralModel model(fom, model_input(cfg.model));
  Trajectory tr = integrate_ode(model, fom_initial_state(cfg, fom), 0.0, grid, cfg.integrator, stats);
  tr.layout = fom.layout;
  return tr;
}

json stats_json(const IntegratorStats& s) {
  return {{"steps", s.steps},
          {"rhs_evals", s.rhs_evals},
          {"jacobian_evals", s.jacobian_evals},
          {"factorizations", s.factorizations},
          {"newton_iterations", s.newton_iterations}};
}

/// Mode selection per variable: explicit list, then rank override, then r.
std::map<std::string, std::vector<Index>> mode_selection(const RunConfig& cfg,
                                                         const std::vector<std::string>& names) {
  std::map<std::string, std::vector<Index>> sel;
  const ReductionConfig& r = cfg.reduction;
  for (const auto& name : names) {
    if (const auto it = r.modes.find(name); it != r.modes.end()) {
      sel[name] = it->second;
    } else if (const auto jt = r.ranks.find(name); jt != r.ranks.end()) {
      sel[name] = leading_modes(jt->second);
    } else {
      sel[name] = leading_modes(r.r);
    }
  }
  return sel;
}

PODBasis restrict_pod(const PODBasis& pod, const Layout& layout) {
  PODBasis out;
  for (const auto& b : pod.blocks) {
    if (layout.contains(b.name)) out.blocks.push_back(b);
  }
  return out;
}

std::vector<std::string> identity_in(const std::vector<std::string>& identity, const Layout& l) {
  std::vector<std::string> out;
  for (const auto& name : identity) {
    if (l.contains(name)) out.push_back(name);
  }
  return out;
}

struct Reduction {
  std::vector<double> grid;
  Trajectory fom_traj;
  Index training = 0;
  PODBasis pod;
  json rom;
  json details;
};

Reduction reduce(const RunConfig& cfg) {
  if (cfg.reduction.method == Method::None) {
    throw ConfigError("config key 'reduction.method' must be \"pod\" or \"pod-deim\" for this command");
  }
  Reduction red;
  const GeneralNonlinearSystem fom = build_fom(cfg);
  red.grid = uniform_grid(0.0, cfg.t_f(), cfg.snapshots);
  red.training = cfg.training_count(red.grid);
  red.fom_traj = simulate_fom(cfg, fom, red.grid);
  const Vector x0 = fom_initial_state(cfg, fom);
  const Trajectory train = prepend_state(red.fom_traj, 0.0, x0);
  const FormLift lift = form_lift(cfg, fom);
  const Trajectory lifted = map_columns(train, lift.layout, lift.map);
  const Vector lifted_x0 = lift.map(x0);

  std::vector<std::string> reduced_vars;
  for (const auto& name : lift.layout.names()) {
    if (std::find(cfg.reduction.identity.begin(), cfg.reduction.identity.end(), name) ==
        cfg.reduction.identity.end()) {
      reduced_vars.push_back(name);
    }
  }
  const SnapshotSet snaps = collect_snapshots(lifted, reduced_vars, red.training + 1);
  red.pod = compute_pod_basis(snaps, mode_selection(cfg, reduced_vars));

  json rom;
  rom["model"] = to_string(cfg.model);
  rom["form"] = to_string(cfg.form);
  rom["method"] = to_string(cfg.reduction.method);
  json dims;
  for (const auto& b : red.pod.blocks) dims["r"][b.name] = b.rank();
  for (const auto& name : cfg.reduction.identity) dims["r"][name] = lift.layout.block(name).size;

  if (cfg.form == Form::QBDAE) {
    const QBSystem sys = build_tubular_qbdae(cfg.tubular);
    const auto [l1, l2] = split_layout(sys.layout, sys.blocks->n1);
    const ProjectionBasis v1(l1, restrict_pod(red.pod, l1));
    const ProjectionBasis v2(l2, restrict_pod(red.pod, l2), identity_in(cfg.reduction.identity, l2));
    ReducedQBDAE rq = project_qbdae(sys, v1, v2);
    dims["r1"] = rq.r1();
    dims["r2"] = rq.r2();
    dims["total"] = rq.r1();
    rom["lift_layout"] = layout_to_json(l1);
    rom["reduced_layout"] = layout_to_json(v1.reduced_layout());
    const Vector xr0 = v1.restrict(Vector(lifted_x0.head(l1.total())));
    rom["x0"] = std::vector<double>(xr0.begin(), xr0.end());
    try {
      SubstitutionOptions so;
      so.max_bytes = cfg.reduction.substitution_budget;
      rq = precompute_substituted_ode(std::move(rq), so);
      rom["kind"] = "polynomial";
      rom["system"] = polynomial_to_json(rq.substituted_system());
    } catch (const BudgetError& e) {
      spdlog::info("substituted form not precomputed: {}", e.what());
      rom["kind"] = "qbdae";
      rom["blocks"] = qb_blocks_to_json(rq.blocks);
    }
  } else {
    const ProjectionBasis v(lift.layout, red.pod);
    dims["total"] = v.reduced_dim();
    rom["lift_layout"] = layout_to_json(lift.layout);
    rom["reduced_layout"] = layout_to_json(v.reduced_layout());
    const Vector xr0 = v.restrict(lifted_x0);
    rom["x0"] = std::vector<double>(xr0.begin(), xr0.end());
    if (cfg.form == Form::Fom && cfg.reduction.method == Method::Pod) {
      rom["kind"] = "pod-galerkin";
    } else if (cfg.form == Form::Fom) {
      const Matrix gs = nonlinear_snapshots(*fom.g, train, red.training + 1);
      const DEIMOperator deim = deim_build(gs, cfg.reduction.r_deim);
      dims["r_deim"] = deim.size();
      rom["kind"] = "pod-deim";
      rom["rom"] = pod_deim_to_json(build_pod_deim_rom(fom, v, deim));
    } else if (cfg.form == Form::LiftedQB) {
      rom["kind"] = "polynomial";
      rom["system"] = polynomial_to_json(project_qb(build_fhn_lifted_qb(cfg.fhn), v).to_polynomial());
    } else {
      QuarticProjectionOptions qo;
      qo.max_rank = cfg.reduction.max_rank;
      qo.allow_large = cfg.reduction.allow_large;
      rom["kind"] = "polynomial";
      rom["system"] = polynomial_to_json(project_quartic(build_tubular_quartic(cfg.tubular), v, qo).to_polynomial());
    }
  }
  red.rom = std::move(rom);
  red.details = {{"dimension", dims},
                 {"training", {{"count", red.training},
                               {"includes_initial_state", true},
                               {"t_end", red.grid[static_cast<std::size_t>(red.training - 1)]}}},
                 {"rom_kind", red.rom["kind"]}};
  return red;
}

std::vector<std::string> write_reduction(const Reduction& red, const fs::path& out) {
  std::vector<std::string> files;
  json basis = pod_basis_to_json(red.pod);
  write_json(out / "basis.json", basis);
  files.push_back("basis.json");
  write_json(out / "rom.json", red.rom);
  files.push_back("rom.json");
  for (const auto& b : red.pod.blocks) {
    const std::string name = "sigma_" + b.name + ".csv";
    write_sigma_csv(out / name, b.sigma);
    files.push_back(name);
  }
  return files;
}

}  // namespace

int run_guarded(const std::function<int()>& body) {
  try {
    return body();
  } catch (const IntegrationError& e) {
    spdlog::error("numerical failure: {}", e.what());
    return kExitNumerical;
  } catch (const DomainError& e) {
    spdlog::error("numerical failure: {}", e.what());
    return kExitNumerical;
  } catch (const RankError& e) {
    spdlog::error("{}", e.what());
    return kExitConfig;
  } catch (const Error& e) {
    spdlog::error("{}", e.what());
    return kExitConfig;
  } catch (const fs::filesystem_error& e) {
    spdlog::error("{}", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    spdlog::error("unexpected failure: {}", e.what());
    return kExitNumerical;
  }
}

std::vector<std::string> original_variables(ModelKind model) {
  return model == ModelKind::FHN ? std::vector<std::string>{"v", "w"}
                                 : std::vector<std::string>{"psi", "theta"};
}

void cmd_simulate(const RunConfig& cfg, const fs::path& out) {
  prepare_out(out);
  const GeneralNonlinearSystem fom = build_fom(cfg);
  const std::vector<double> grid = uniform_grid(0.0, cfg.t_f(), cfg.snapshots);
  const Vector x0 = fom_initial_state(cfg, fom);
  const FormLift lift = form_lift(cfg, fom);
  IntegratorStats stats;
  Trajectory tr;
  if (cfg.form == Form::Fom) {
    tr = simulate_fom(cfg, fom, grid, &stats);
  } else if (cfg.form == Form::QBDAE) {
    const QBSystem sys = build_tubular_qbdae(cfg.tubular);
    tr = solve_qbdae(sys, Vector(lift.map(x0).head(sys.blocks->n1)), tubular_input(), 0.0, grid,
                     cfg.integrator, &stats);
  } else {
    const PolynomialSystem sys = cfg.form == Form::LiftedQB
                                     ? build_fhn_lifted_qb(cfg.fhn).to_polynomial()
                                     : build_tubular_quartic(cfg.tubular).to_polynomial();
    const PolynomialModel model(sys, model_input(cfg.model));
    tr = integrate_ode(model, lift.map(x0), 0.0, grid, cfg.integrator, &stats);
  }
  tr.layout = lift.layout;
  tr.write_csv(out / "trajectory.csv");
  spdlog::info("simulated {} {} on {} output times ({} steps)", to_string(cfg.model),
               to_string(cfg.form), grid.size(), stats.steps);
  write_manifest(out, "simulate", cfg,
                 {{"state_dimension", tr.dim()}, {"rows", tr.steps()}, {"integrator", stats_json(stats)}},
                 {"trajectory.csv"});
}

void cmd_reduce(const RunConfig& cfg, const fs::path& out) {
  prepare_out(out);
  const Reduction red = reduce(cfg);
  const auto files = write_reduction(red, out);
  spdlog::info("reduced {} {} to dimension {}", to_string(cfg.model), to_string(cfg.form),
               red.details["dimension"]["total"].get<Index>());
  write_manifest(out, "reduce", cfg, red.details, files);
}

LoadedRom load_rom(const fs::path& dir, const RunConfig& cfg) {
  const json rom = json::parse(read_text(dir / "rom.json"));
  const PODBasis pod = pod_basis_from_json(json::parse(read_text(dir / "basis.json")));
  LoadedRom out;
  out.kind = rom.at("kind").get<std::string>();
  const Layout lift_layout = layout_from_json(rom.at("lift_layout"));
  out.lift = ProjectionBasis(lift_layout, restrict_pod(pod, lift_layout),
                             identity_in(cfg.reduction.identity, lift_layout));
  const auto x0 = rom.at("x0").get<std::vector<double>>();
  out.x0 = Eigen::Map<const Vector>(x0.data(), static_cast<Index>(x0.size()));
  const InputSignal input = model_input(cfg.model);
  if (out.kind == "polynomial") {
    out.model = std::make_unique<PolynomialModel>(polynomial_from_json(rom.at("system")), input);
  } else if (out.kind == "qbdae") {
    out.model = std::make_unique<SubstitutedQBDAEModel>(qb_blocks_from_json(rom.at("blocks")), input);
  } else if (out.kind == "pod-deim") {
    out.model = std::make_unique<PodDeimModel>(pod_deim_from_json(rom.at("rom")), input);
  } else if (out.kind == "pod-galerkin") {
    out.model = std::make_unique<PodGalerkinModel>(build_fom(cfg), out.lift, input);
  } else {
    throw ConfigError("rom.json: unknown model kind '" + out.kind + "'");
  }
  if (out.model->dim() != out.x0.size() || out.lift.reduced_dim() != out.x0.size()) {
    throw DimensionError("rom.json: reduced dimension does not match the stored basis");
  }
  return out;
}

void cmd_simulate_rom(const RunConfig& cfg, const fs::path& out) {
  prepare_out(out);
  const Reduction red = reduce(cfg);
  auto files = write_reduction(red, out);
  const LoadedRom rom = load_rom(out, cfg);
  IntegratorStats stats;
  Trajectory reduced = integrate_ode(*rom.model, rom.x0, 0.0, red.grid, cfg.integrator, &stats);
  reduced.layout = rom.lift.reduced_layout();
  reduced.write_csv(out / "rom_trajectory.csv");
  files.push_back("rom_trajectory.csv");

  Trajectory lifted;
  lifted.times = reduced.times;
  lifted.layout = rom.lift.full_layout();
  lifted.states = rom.lift.lift(reduced.states);
  const auto vars = original_variables(cfg.model);
  lifted.restrict_to(vars).write_csv(out / "rom_lifted.csv");
  files.push_back("rom_lifted.csv");
  const double err = avg_rel_state_error(red.fom_traj, lifted, vars);
  spdlog::info("ROM ({}) average relative state error {:.3e}", rom.kind, err);
  json details = red.details;
  details["error"] = err;
  details["integrator"] = stats_json(stats);
  write_manifest(out, "simulate-rom", cfg, details, files);
}

void cmd_experiment(const std::string& name, const RunConfig& cfg, const fs::path& out) {
  if (name != to_string(cfg.model)) {
    throw ConfigError("experiment '" + name + "' does not match config model '" +
                      to_string(cfg.model) + "'");
  }
  prepare_out(out);
  const ExperimentResult res = cfg.model == ModelKind::FHN
                                   ? run_fhn_experiment(fhn_experiment_config(cfg))
                                   : run_tubular_experiment(tubular_experiment_config(cfg));
  write_experiment(res, out);
  std::vector<std::string> files = {"errors.csv", "summary.json"};
  for (const auto& q : res.qoi) files.push_back("qoi_" + q.label + ".csv");
  for (const auto& s : res.sigma) files.push_back("sigma_" + s.first + ".csv");
  write_manifest(out, "experiment", cfg, {{"rows", res.rows.size()}}, files, {"timings.csv"});
}

}  // namespace liftrom::cli
