#include "liftrom/bench/experiments.hpp"

#include "liftrom/dynamics/polynomial_system.hpp"
#include "liftrom/dynamics/qbdae_solver.hpp"
#include "liftrom/errors.hpp"
#include "liftrom/reduction/deim.hpp"
#include "liftrom/reduction/projection.hpp"
#include "liftrom/tensor/linalg.hpp"

#include <spdlog/spdlog.h>

#include <chrono>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <optional>

namespace liftrom {

namespace {

using Clock = std::chrono::steady_clock;
constexpr double kInf = std::numeric_limits<double>::infinity();

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Trajectory lifted_rom_trajectory(const ProjectionBasis& v, const Trajectory& reduced) {
  Trajectory out;
  out.times = reduced.times;
  out.layout = v.full_layout();
  out.states = v.lift(reduced.states);
  return out;
}

std::map<std::string, Index> equal_ranks(const std::vector<std::string>& names, Index r) {
  std::map<std::string, Index> m;
  for (const auto& n : names) m[n] = r;
  return m;
}

std::optional<ErrorRow> run_qoi_rom(const std::string& label, const std::function<ErrorRow()>& run) {
  try {
    return run();
  } catch (const IntegrationError& e) {
    spdlog::warn("{} QoI ROM integration failed: {}", label, e.what());
  } catch (const DomainError& e) {
    spdlog::warn("{} QoI ROM left the model domain: {}", label, e.what());
  }
  return std::nullopt;
}

struct SweepTask {
  ErrorRow key;
  std::function<ErrorRow()> run;
};

std::vector<ErrorRow> run_sweep(const std::vector<SweepTask>& tasks) {
  std::vector<std::optional<ErrorRow>> results(tasks.size());
  const auto nt = static_cast<std::ptrdiff_t>(tasks.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < nt; ++i) {
    const auto& task = tasks[static_cast<std::size_t>(i)];
    const auto& k = task.key;
    try {
      ErrorRow row = task.run();
      spdlog::info("{} {} r1={} r2={} r_deim={}: error {:.3e} ({:.1f} s)", k.model, k.method, k.r1,
                   k.r2, k.r_deim, row.error, row.offline_seconds + row.online_seconds);
      results[static_cast<std::size_t>(i)] = row;
    } catch (const IntegrationError& e) {
      spdlog::warn("{} {} r1={} r2={} r_deim={}: ROM integration failed: {}", k.model, k.method,
                   k.r1, k.r2, k.r_deim, e.what());
      ErrorRow row = k;
      row.error = kInf;
      results[static_cast<std::size_t>(i)] = row;
    } catch (const DomainError& e) {
      spdlog::warn("{} {} r1={} r2={} r_deim={}: ROM left the model domain: {}", k.model,
                   k.method, k.r1, k.r2, k.r_deim, e.what());
      ErrorRow row = k;
      row.error = kInf;
      results[static_cast<std::size_t>(i)] = row;
    } catch (const RankError& e) {
      spdlog::warn("{} {} r1={} r2={} r_deim={}: skipped: {}", k.model, k.method, k.r1, k.r2,
                   k.r_deim, e.what());
    } catch (const BudgetError& e) {
      spdlog::warn("{} {} r1={} r2={} r_deim={}: skipped: {}", k.model, k.method, k.r1, k.r2,
                   k.r_deim, e.what());
    }
  }
  std::vector<ErrorRow> rows;
  for (auto& r : results) {
    if (r) rows.push_back(*r);
  }
  sort_rows(rows);
  return rows;
}

std::vector<Index> deim_sizes(const std::vector<Index>& fixed, bool equal_r, Index r) {
  std::vector<Index> out = fixed;
  if (equal_r && std::find(out.begin(), out.end(), r) == out.end()) out.push_back(r);
  return out;
}

const std::vector<std::string> kFhnLifted = {"v", "w", "z"};
const std::vector<std::string> kFhnState = {"v", "w"};
const std::vector<std::string> kTubState = {"psi", "theta"};
const std::vector<std::string> kTubX1 = {"psi", "theta", "w1", "w2", "w3"};
const std::vector<std::string> kTubX2 = {"w4", "w5", "w6"};

Matrix nonlinear_basis(const Matrix& g_snapshots, Vector& sigma) {
  const SVDResult svd = thin_svd(g_snapshots);
  sigma = svd.sigma;
  const Index rank = numerical_rank(svd.sigma, g_snapshots.rows(), g_snapshots.cols());
  return svd.U.leftCols(rank);
}

DEIMOperator deim_from_context(const Matrix& g_basis, Index r_deim) {
  if (r_deim > g_basis.cols()) {
    throw RankError("r_deim = " + std::to_string(r_deim) +
                        " exceeds the numerical rank " + std::to_string(g_basis.cols()) +
                        " of the nonlinear snapshots",
                    g_basis.cols());
  }
  return deim_from_basis(g_basis.leftCols(r_deim));
}

}  // namespace

// ---------------------------------------------------------------- FHN

FHNContext prepare_fhn(const FHNExperimentConfig& cfg) {
  FHNContext ctx;
  ctx.cfg = cfg;
  ctx.fom = build_fhn_fom(cfg.model);
  ctx.lifted = build_fhn_lifted_qb(cfg.model);
  ctx.grid = uniform_grid(0.0, cfg.model.t_f, cfg.snapshots);
  const auto t0 = Clock::now();
  const GeneralModel model(ctx.fom, fhn_input());
  ctx.fom_traj = integrate_ode(model, Vector::Zero(ctx.fom.dim()), 0.0, ctx.grid, cfg.integrator);
  ctx.fom_traj.layout = ctx.fom.layout;
  ctx.fom_seconds = seconds_since(t0);
  spdlog::info("fhn FOM (n = {}) integrated in {:.1f} s", cfg.model.n, ctx.fom_seconds);

  const Index n = cfg.model.n;
  const Trajectory train = prepend_state(ctx.fom_traj, 0.0, Vector::Zero(ctx.fom.dim()));
  const Trajectory lifted = map_columns(train, ctx.lifted.layout, [n](const Vector& x) {
    return fhn_lift_ic(x.head(n), x.tail(n));
  });
  ctx.lifted_pod = compute_full_pod(collect_snapshots(lifted, cfg.training + 1));
  ctx.g_snapshots = nonlinear_snapshots(*ctx.fom.g, train, cfg.training + 1);
  ctx.g_basis = nonlinear_basis(ctx.g_snapshots, ctx.g_sigma);
  return ctx;
}

ErrorRow run_fhn_qb_pod(const FHNContext& ctx, Index r, Trajectory* rom) {
  ErrorRow row{"fhn", "qb-pod", 3 * r, 0, 0};
  const auto t0 = Clock::now();
  const ProjectionBasis v(ctx.lifted.layout, truncate_pod(ctx.lifted_pod, equal_ranks(kFhnLifted, r)));
  const QBSystem red = project_qb(ctx.lifted, v);
  const PolynomialModel model(red.to_polynomial(), fhn_input());
  const Vector x0 = v.restrict(Vector::Zero(ctx.lifted.dim()));
  row.offline_seconds = seconds_since(t0);
  const auto t1 = Clock::now();
  const Trajectory red_traj = integrate_ode(model, x0, 0.0, ctx.grid, ctx.cfg.integrator);
  row.online_seconds = seconds_since(t1);
  const Trajectory full = lifted_rom_trajectory(v, red_traj);
  row.error = avg_rel_state_error(ctx.fom_traj, full, kFhnState);
  if (rom) *rom = full.restrict_to(kFhnState);
  return row;
}

ErrorRow run_fhn_pod_deim(const FHNContext& ctx, Index r, Index r_deim) {
  ErrorRow row{"fhn", "pod-deim", 2 * r, 0, r_deim};
  const auto t0 = Clock::now();
  const ProjectionBasis v(ctx.fom.layout, truncate_pod(ctx.lifted_pod, equal_ranks(kFhnState, r)));
  const DEIMOperator deim = deim_from_context(ctx.g_basis, r_deim);
  const PodDeimModel model(build_pod_deim_rom(ctx.fom, v, deim), fhn_input());
  const Vector x0 = v.restrict(Vector::Zero(ctx.fom.dim()));
  row.offline_seconds = seconds_since(t0);
  const auto t1 = Clock::now();
  const Trajectory red_traj = integrate_ode(model, x0, 0.0, ctx.grid, ctx.cfg.integrator);
  row.online_seconds = seconds_since(t1);
  row.error = avg_rel_state_error(ctx.fom_traj, lifted_rom_trajectory(v, red_traj), kFhnState);
  return row;
}

ExperimentResult run_fhn_experiment(const FHNExperimentConfig& cfg) {
  const FHNContext ctx = prepare_fhn(cfg);
  std::vector<SweepTask> tasks;
  for (Index r : cfg.qb_ranks) {
    tasks.push_back({{"fhn", "qb-pod", 3 * r, 0, 0}, [&ctx, r] { return run_fhn_qb_pod(ctx, r); }});
  }
  for (Index r : cfg.deim_ranks) {
    for (Index m : deim_sizes(cfg.r_deim, cfg.r_deim_equal_r, r)) {
      tasks.push_back({{"fhn", "pod-deim", 2 * r, 0, m},
                       [&ctx, r, m] { return run_fhn_pod_deim(ctx, r, m); }});
    }
  }
  ExperimentResult res;
  res.rows = run_sweep(tasks);

  res.qoi.push_back(extract_qoi(ctx.fom_traj, "v(0,t)", "fom_"));
  res.qoi.push_back(extract_qoi(ctx.fom_traj, "w(0,t)", "fom_"));
  Trajectory rom;
  const std::optional<ErrorRow> qoi_row =
      run_qoi_rom("fhn qb-pod", [&] { return run_fhn_qb_pod(ctx, cfg.qoi_rank, &rom); });
  if (qoi_row) {
    const std::string prefix = "qb-pod_" + std::to_string(3 * cfg.qoi_rank) + "_";
    res.qoi.push_back(extract_qoi(rom, "v(0,t)", prefix));
    res.qoi.push_back(extract_qoi(rom, "w(0,t)", prefix));
  }
  for (const auto& name : kFhnLifted) res.sigma.emplace_back(name, ctx.lifted_pod.block(name).sigma);

  res.summary = {{"model", "fhn"},
                 {"n", cfg.model.n},
                 {"snapshots", cfg.snapshots},
                 {"training", cfg.training},
                 {"qoi_rank_total", 3 * cfg.qoi_rank},
                 {"qoi_error", qoi_row ? qoi_row->error : kInf},
                 {"qoi_rom_failed", !qoi_row}};
  return res;
}

// ---------------------------------------------------------------- tubular

TubularContext prepare_tubular(const TubularExperimentConfig& cfg) {
  TubularContext ctx;
  ctx.cfg = cfg;
  ctx.fom = build_tubular_fom(cfg.model);
  ctx.quartic = build_tubular_quartic(cfg.model);
  ctx.qbdae = build_tubular_qbdae(cfg.model);
  ctx.grid = uniform_grid(0.0, cfg.model.t_f, cfg.snapshots);
  ctx.training = window_count(ctx.grid, cfg.training_end);
  const auto t0 = Clock::now();
  const GeneralModel model(ctx.fom, tubular_input());
  const Vector x0 = tubular_initial_state(cfg.model);
  ctx.fom_traj = integrate_ode(model, x0, 0.0, ctx.grid, cfg.integrator);
  ctx.fom_traj.layout = ctx.fom.layout;
  ctx.fom_seconds = seconds_since(t0);
  spdlog::info("tubular FOM (n = {}, D = {}) integrated in {:.1f} s", cfg.model.n,
               cfg.model.damkohler, ctx.fom_seconds);

  const Index n = cfg.model.n;
  const double gamma = cfg.model.gamma;
  const Trajectory train = prepend_state(ctx.fom_traj, 0.0, x0);
  const Trajectory lifted = map_columns(train, ctx.qbdae.layout, [n, gamma](const Vector& x) {
    return tubular_qbdae_ic(x.head(n), x.tail(n), gamma);
  });
  ctx.lifted_pod = compute_full_pod(collect_snapshots(lifted, ctx.training + 1));
  ctx.g_snapshots = nonlinear_snapshots(*ctx.fom.g, train, ctx.training + 1);
  ctx.g_basis = nonlinear_basis(ctx.g_snapshots, ctx.g_sigma);
  return ctx;
}

ErrorRow run_tubular_quartic(const TubularContext& ctx, Index r) {
  ErrorRow row{"tubular", "quartic", 5 * r, 0, 0};
  const auto t0 = Clock::now();
  const ProjectionBasis v(ctx.quartic.layout, truncate_pod(ctx.lifted_pod, equal_ranks(kTubX1, r)));
  const ReducedQuartic red = project_quartic(ctx.quartic, v);
  const PolynomialModel model(red.to_polynomial(), tubular_input());
  const Vector s0 = tubular_initial_state(ctx.cfg.model);
  const Index n = ctx.cfg.model.n;
  const Vector x0 = v.restrict(tubular_quartic_ic(s0.head(n), s0.tail(n), ctx.cfg.model.gamma));
  row.offline_seconds = seconds_since(t0);
  const auto t1 = Clock::now();
  const Trajectory red_traj = integrate_ode(model, x0, 0.0, ctx.grid, ctx.cfg.integrator);
  row.online_seconds = seconds_since(t1);
  row.error = avg_rel_state_error(ctx.fom_traj, lifted_rom_trajectory(v, red_traj), kTubState);
  return row;
}

ErrorRow run_tubular_qbdae(const TubularContext& ctx, Index r1, Index r2, Trajectory* rom) {
  const Index n = ctx.cfg.model.n;
  ErrorRow row{"tubular", "qbdae", 5 * r1, r2 > 0 ? 3 * r2 : 3 * n, 0};
  const auto t0 = Clock::now();
  const auto [l1, l2] = split_layout(ctx.qbdae.layout, ctx.qbdae.blocks->n1);
  const ProjectionBasis v1(l1, truncate_pod(ctx.lifted_pod, equal_ranks(kTubX1, r1)));
  const ProjectionBasis v2 = r2 > 0
                                 ? ProjectionBasis(l2, truncate_pod(ctx.lifted_pod, equal_ranks(kTubX2, r2)))
                                 : ProjectionBasis::identity(l2);
  ReducedQBDAE red = project_qbdae(ctx.qbdae, v1, v2);
  std::unique_ptr<OdeModel> model;
  try {
    SubstitutionOptions so;
    so.max_bytes = ctx.cfg.substitution_budget;
    red = precompute_substituted_ode(std::move(red), so);
    model = std::make_unique<PolynomialModel>(red.substituted_system(), tubular_input());
  } catch (const BudgetError& e) {
    spdlog::debug("substituted form skipped, evaluating x2 per call: {}", e.what());
    model = std::make_unique<SubstitutedQBDAEModel>(red.blocks, tubular_input());
  }
  const Vector s0 = tubular_initial_state(ctx.cfg.model);
  const Vector x1_0 = tubular_quartic_ic(s0.head(n), s0.tail(n), ctx.cfg.model.gamma);
  const Vector x0 = v1.restrict(x1_0);
  row.offline_seconds = seconds_since(t0);
  const auto t1 = Clock::now();
  const Trajectory red_traj = integrate_ode(*model, x0, 0.0, ctx.grid, ctx.cfg.integrator);
  row.online_seconds = seconds_since(t1);
  const Trajectory full = lifted_rom_trajectory(v1, red_traj);
  row.error = avg_rel_state_error(ctx.fom_traj, full, kTubState);
  if (rom) *rom = full.restrict_to(kTubState);
  return row;
}

ErrorRow run_tubular_pod_deim(const TubularContext& ctx, Index r, Index r_deim) {
  ErrorRow row{"tubular", "pod-deim", 2 * r, 0, r_deim};
  const auto t0 = Clock::now();
  const ProjectionBasis v(ctx.fom.layout, truncate_pod(ctx.lifted_pod, equal_ranks(kTubState, r)));
  const DEIMOperator deim = deim_from_context(ctx.g_basis, r_deim);
  const PodDeimModel model(build_pod_deim_rom(ctx.fom, v, deim), tubular_input());
  const Vector x0 = v.restrict(tubular_initial_state(ctx.cfg.model));
  row.offline_seconds = seconds_since(t0);
  const auto t1 = Clock::now();
  const Trajectory red_traj = integrate_ode(model, x0, 0.0, ctx.grid, ctx.cfg.integrator);
  row.online_seconds = seconds_since(t1);
  row.error = avg_rel_state_error(ctx.fom_traj, lifted_rom_trajectory(v, red_traj), kTubState);
  return row;
}

ErrorRow run_tubular_pod(const TubularContext& ctx, Index r) {
  ErrorRow row{"tubular", "pod", 2 * r, 0, 0};
  const auto t0 = Clock::now();
  const ProjectionBasis v(ctx.fom.layout, truncate_pod(ctx.lifted_pod, equal_ranks(kTubState, r)));
  const PodGalerkinModel model(ctx.fom, v, tubular_input());
  const Vector x0 = v.restrict(tubular_initial_state(ctx.cfg.model));
  row.offline_seconds = seconds_since(t0);
  const auto t1 = Clock::now();
  const Trajectory red_traj = integrate_ode(model, x0, 0.0, ctx.grid, ctx.cfg.integrator);
  row.online_seconds = seconds_since(t1);
  row.error = avg_rel_state_error(ctx.fom_traj, lifted_rom_trajectory(v, red_traj), kTubState);
  return row;
}

ExperimentResult run_tubular_experiment(const TubularExperimentConfig& cfg) {
  const TubularContext ctx = prepare_tubular(cfg);
  std::vector<SweepTask> tasks;
  const Index n = cfg.model.n;
  for (Index r : cfg.quartic_ranks) {
    tasks.push_back({{"tubular", "quartic", 5 * r, 0, 0},
                     [&ctx, r] { return run_tubular_quartic(ctx, r); }});
  }
  for (Index r1 : cfg.qbdae_r1) {
    for (Index r2 : cfg.qbdae_r2) {
      tasks.push_back({{"tubular", "qbdae", 5 * r1, r2 > 0 ? 3 * r2 : 3 * n, 0},
                       [&ctx, r1, r2] { return run_tubular_qbdae(ctx, r1, r2); }});
    }
  }
  for (Index r : cfg.deim_ranks) {
    for (Index m : deim_sizes(cfg.r_deim, cfg.r_deim_equal_r, r)) {
      tasks.push_back({{"tubular", "pod-deim", 2 * r, 0, m},
                       [&ctx, r, m] { return run_tubular_pod_deim(ctx, r, m); }});
    }
  }
  for (Index r : cfg.pod_ranks) {
    tasks.push_back({{"tubular", "pod", 2 * r, 0, 0}, [&ctx, r] { return run_tubular_pod(ctx, r); }});
  }
  ExperimentResult res;
  res.rows = run_sweep(tasks);

  const QoISeries fom_q = extract_qoi(ctx.fom_traj, "theta(1,t)", "fom_");
  res.qoi.push_back(fom_q);
  Trajectory rom;
  const std::optional<ErrorRow> qoi_row = run_qoi_rom(
      "tubular qbdae", [&] { return run_tubular_qbdae(ctx, cfg.qoi_r1, cfg.qoi_r2, &rom); });
  if (qoi_row) {
    res.qoi.push_back(extract_qoi(rom, "theta(1,t)",
                                  "qbdae_" + std::to_string(5 * cfg.qoi_r1) + "_" +
                                      std::to_string(3 * cfg.qoi_r2) + "_"));
  }
  for (const auto& name : kTubState) res.sigma.emplace_back(name, ctx.lifted_pod.block(name).sigma);
  res.summary = {{"model", "tubular"},
                 {"n", n},
                 {"damkohler", cfg.model.damkohler},
                 {"snapshots", cfg.snapshots},
                 {"training", ctx.training},
                 {"theta_exit_amplitude", oscillation_amplitude(fom_q)},
                 {"qoi_r1", 5 * cfg.qoi_r1},
                 {"qoi_r2", 3 * cfg.qoi_r2},
                 {"qoi_error", qoi_row ? qoi_row->error : kInf},
                 {"qoi_rom_failed", !qoi_row}};
  return res;
}

void write_experiment(const ExperimentResult& result, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory " + dir.string() + ": " + ec.message());
  write_errors_csv(dir / "errors.csv", result.rows);
  write_timings_csv(dir / "timings.csv", result.rows);
  for (const auto& q : result.qoi) write_qoi_csv(dir, q);
  for (const auto& [name, sigma] : result.sigma) write_sigma_csv(dir / ("sigma_" + name + ".csv"), sigma);
  std::ofstream os(dir / "summary.json", std::ios::binary);
  if (!os) throw ConfigError("cannot write " + (dir / "summary.json").string());
  os << result.summary.dump(2) << '\n';
}

}  // namespace liftrom
