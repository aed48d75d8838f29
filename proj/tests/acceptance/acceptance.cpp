#include "liftrom/bench/experiments.hpp"
#include "liftrom/bench/metrics.hpp"
#include "liftrom/cli/verify.hpp"
#include "liftrom/dynamics/general_system.hpp"
#include "liftrom/dynamics/integrator.hpp"
#include "liftrom/dynamics/polynomial_system.hpp"
#include "liftrom/dynamics/qbdae_solver.hpp"
#include "liftrom/log.hpp"
#include "liftrom/models/fhn.hpp"
#include "liftrom/models/scalar_example.hpp"
#include "liftrom/models/tubular.hpp"
#include "liftrom/reduction/pod.hpp"
#include "liftrom/reduction/projection.hpp"
#include "liftrom/reduction/reduced_systems.hpp"
#include "liftrom/reduction/snapshots.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <vector>

using namespace liftrom;

namespace {

constexpr double kScalarTol = 1e-6;
constexpr double kScalarSeconds = 1.0;
constexpr double kLiftTolSteady = 1e-6;
constexpr double kLiftTolCycle = 1e-5;
constexpr double kFhnNewtonTol = 1e-15;
constexpr double kProjectionTol = 1e-12;
constexpr int kProjectionSamples = 100;
constexpr double kSteadyAmplitude = 1e-3;
constexpr double kCycleAmplitude = 1e-2;
constexpr double kStableTarget = 6.71e-5;
constexpr double kUnstableTarget = 8.95e-3;
constexpr double kTargetFactor = 10.0;
constexpr Index kTailPoints = 3;        ///< points that define a plateau
constexpr double kFlatRatio = 2.0;      ///< max/min over the tail of a flattened curve
constexpr double kMonotoneSlack = 1.5;  ///< allowed rise between consecutive sizes
constexpr double kDecreaseFactor = 1e-2;  ///< last/first error of a decreasing curve
constexpr double kSaturation = 1e-10;   ///< errors below this count as saturated
constexpr double kSigmaTol = 1e-6;
constexpr double kSigmaFloor = 1e-10;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
  int id;
  std::string name;
  bool pass;
  std::string detail;
};

std::vector<Outcome> outcomes;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
  std::printf("%s [%d] %s: %s\n", pass ? "PASS" : "FAIL", id, name.c_str(), detail.c_str());
  std::fflush(stdout);
  outcomes.push_back({id, name, pass, detail});
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", v);
  return buf;
}

// ---------------------------------------------------------------- scalar

void scalar_lifting() {
  const auto t0 = Clock::now();
  const double x0 = 0.5;
  const auto grid = uniform_grid(0.0, 1.0, 100);
  const InputSignal zero(1);
  const Trajectory direct =
      integrate_ode(PolynomialModel(scalar_example::quartic().to_polynomial(), zero), Vector{{x0}}, 0.0, grid);
  const Trajectory qb = integrate_ode(PolynomialModel(scalar_example::qb_ode().to_polynomial(), zero),
                                      scalar_example::qb_ode_state(x0), 0.0, grid);
  const Trajectory dae = solve_qbdae(scalar_example::qb_dae(), Vector{{x0}}, zero, 0.0, grid);
  const double seconds = seconds_since(t0);
  double worst = 0.0;
  for (Index i = 0; i < direct.steps(); ++i) {
    const double exact = scalar_example::analytic(x0, grid[static_cast<std::size_t>(i)]);
    for (double x : {direct.states(0, i), qb.states(0, i), dae.states(0, i)}) {
      worst = std::max(worst, std::abs(x - exact) / std::abs(exact));
    }
    worst = std::max(worst, std::abs(qb.states(0, i) - direct.states(0, i)) / std::abs(direct.states(0, i)));
    worst = std::max(worst, std::abs(dae.states(0, i) - direct.states(0, i)) / std::abs(direct.states(0, i)));
  }
  report(1, "lifting exactness, scalar example", worst <= kScalarTol && seconds < kScalarSeconds,
         "max rel error " + sci(worst) + " (tol " + sci(kScalarTol) + "), " + sci(seconds) + " s (limit " +
             sci(kScalarSeconds) + " s)");
}

// ---------------------------------------------------------------- full-order runs

struct TubularRun {
  TubularConfig cfg;
  std::vector<double> grid;
  Trajectory fom, quartic, qbdae;
  Vector x0;
};

TubularRun run_tubular(double damkohler) {
  TubularRun run;
  run.cfg.damkohler = damkohler;
  run.grid = uniform_grid(0.0, run.cfg.t_f, 3000);
  const GeneralNonlinearSystem fom = build_tubular_fom(run.cfg);
  run.x0 = tubular_initial_state(run.cfg);
  run.fom = integrate_ode(GeneralModel(fom, tubular_input()), run.x0, 0.0, run.grid);
  run.fom.layout = fom.layout;
  const Index n = run.cfg.n;
  const Vector q0 = tubular_quartic_ic(run.x0.head(n), run.x0.tail(n), run.cfg.gamma);
  const QuarticSystem quartic = build_tubular_quartic(run.cfg);
  run.quartic = integrate_ode(PolynomialModel(quartic.to_polynomial(), tubular_input()), q0, 0.0, run.grid);
  run.quartic.layout = quartic.layout;
  run.qbdae = solve_qbdae(build_tubular_qbdae(run.cfg), q0, tubular_input(), 0.0, run.grid);
  return run;
}

struct FhnRun {
  FHNConfig cfg;
  std::vector<double> grid;
  Trajectory fom, lifted;
};

FhnRun run_fhn() {
  FhnRun run;
  run.grid = uniform_grid(0.0, run.cfg.t_f, 150);
  IntegratorOptions opts;
  opts.newton_tol = kFhnNewtonTol;
  const GeneralNonlinearSystem fom = build_fhn_fom(run.cfg);
  run.fom = integrate_ode(GeneralModel(fom, fhn_input()), Vector::Zero(fom.dim()), 0.0, run.grid, opts);
  run.fom.layout = fom.layout;
  const QBSystem qb = build_fhn_lifted_qb(run.cfg);
  run.lifted = integrate_ode(PolynomialModel(qb.to_polynomial(), fhn_input()), Vector::Zero(qb.dim()), 0.0,
                             run.grid, opts);
  run.lifted.layout = qb.layout;
  return run;
}

void benchmark_lifting(const FhnRun& fhn, const TubularRun& steady, const TubularRun& cycle) {
  const double e_fhn = max_rel_state_error(fhn.fom, fhn.lifted, {"v", "w"});
  const std::vector<std::string> shared = {"psi", "theta"};
  const double e_sq = max_rel_state_error(steady.fom, steady.quartic, shared);
  const double e_sd = max_rel_state_error(steady.fom, steady.qbdae, shared);
  const double period = estimate_period(extract_qoi(cycle.fom, "theta(1,t)"), 20.0);
  const double h = cycle.grid[1] - cycle.grid[0];
  const double t_start = cycle.grid.back() - period;
  const auto max_shift = static_cast<Index>(std::ceil(0.5 * period / h));
  const double e_cq = shift_optimal_rel_error(cycle.fom, cycle.quartic, shared, t_start, max_shift);
  const double e_cd = shift_optimal_rel_error(cycle.fom, cycle.qbdae, shared, t_start, max_shift);
  const bool pass = e_fhn <= kLiftTolSteady && e_sq <= kLiftTolSteady && e_sd <= kLiftTolSteady &&
                    e_cq <= kLiftTolCycle && e_cd <= kLiftTolCycle;
  report(2, "lifting exactness, benchmarks", pass,
         "fhn qb " + sci(e_fhn) + ", D=0.162 quartic " + sci(e_sq) + " qbdae " + sci(e_sd) + " (tol " +
             sci(kLiftTolSteady) + "); D=0.167 final-period quartic " + sci(e_cq) + " qbdae " + sci(e_cd) +
             " (tol " + sci(kLiftTolCycle) + ", period " + sci(period) + ")");
}

// ---------------------------------------------------------------- projection identities

double rel_diff(const Vector& a, const Vector& b) {
  return (a - b).lpNorm<Eigen::Infinity>() / std::max(b.lpNorm<Eigen::Infinity>(), 1e-300);
}

Vector random_state(std::mt19937_64& rng, Index n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Vector x(n);
  for (Index i = 0; i < n; ++i) x[i] = u(rng);
  return x;
}

std::map<std::string, Index> ranks(const std::vector<std::string>& names, Index r) {
  std::map<std::string, Index> m;
  for (const auto& n : names) m[n] = r;
  return m;
}

void projection_identities(const FhnRun& fhn, const TubularRun& tub) {
  std::mt19937_64 rng(0);
  double worst_tensor = 0.0, worst_sub = 0.0;
  Index count = 0;

  const QBSystem fqb = build_fhn_lifted_qb(fhn.cfg);
  const Trajectory f_lifted = map_columns(prepend_state(fhn.fom, 0.0, Vector::Zero(2 * fhn.cfg.n)), fqb.layout,
                                          [n = fhn.cfg.n](const Vector& x) { return fhn_lift_ic(x.head(n), x.tail(n)); });
  const PODBasis fpod = compute_full_pod(collect_snapshots(f_lifted, 101));
  const ProjectionBasis vf(fqb.layout, truncate_pod(fpod, ranks({"v", "w", "z"}, 5)));
  const QBSystem fred = project_qb(fqb, vf);

  const QuarticSystem quartic = build_tubular_quartic(tub.cfg);
  const QBSystem qbdae = build_tubular_qbdae(tub.cfg);
  const Index n = tub.cfg.n;
  const double gamma = tub.cfg.gamma;
  const Trajectory t_lifted = map_columns(prepend_state(tub.fom, 0.0, tub.x0), qbdae.layout,
                                          [n, gamma](const Vector& x) { return tubular_qbdae_ic(x.head(n), x.tail(n), gamma); });
  const PODBasis tpod = compute_full_pod(collect_snapshots(t_lifted, window_count(tub.grid, 20.0) + 1));
  const std::vector<std::string> x1 = {"psi", "theta", "w1", "w2", "w3"};
  const ProjectionBasis vq(quartic.layout, truncate_pod(tpod, ranks(x1, 3)));
  const ReducedQuartic qred = project_quartic(quartic, vq);
  const auto [l1, l2] = split_layout(qbdae.layout, qbdae.blocks->n1);
  const ProjectionBasis v1(l1, truncate_pod(tpod, ranks(x1, 3)));
  const ProjectionBasis v2(l2, truncate_pod(tpod, ranks({"w4", "w5", "w6"}, 3)));
  const ReducedQBDAE dred = precompute_substituted_ode(project_qbdae(qbdae, v1, v2));
  const ProjectionBasis vfull(qbdae.layout, truncate_pod(tpod, [&] {
                                auto m = ranks(x1, 3);
                                for (const char* w : {"w4", "w5", "w6"}) m[w] = 3;
                                return m;
                              }()));
  const QBSystem dassembled = dred.assembled();
  const PolynomialSystem dsub = dred.substituted_system();

  for (int s = 0; s < kProjectionSamples; ++s) {
    const Vector xf = random_state(rng, vf.reduced_dim());
    worst_tensor = std::max(worst_tensor, rel_diff(fred.H.apply_power(xf), vf.restrict(fqb.H.apply_power(vf.lift(xf)))));

    const Vector xq = random_state(rng, vq.reduced_dim());
    const Vector xq_full = vq.lift(xq);
    worst_tensor = std::max(worst_tensor, rel_diff(qred.G2.apply_power(xq), vq.restrict(quartic.G2.apply_power(xq_full))));
    worst_tensor = std::max(worst_tensor, rel_diff(qred.G3.apply_power(xq), vq.restrict(quartic.G3.apply_power(xq_full))));
    worst_tensor = std::max(worst_tensor, rel_diff(qred.G4.apply_power(xq), vq.restrict(quartic.G4.apply_power(xq_full))));

    const Vector xd1 = random_state(rng, v1.reduced_dim());
    const Vector xd2 = random_state(rng, v2.reduced_dim());
    Vector xd(xd1.size() + xd2.size());
    xd << xd1, xd2;
    worst_tensor = std::max(worst_tensor, rel_diff(dred.blocks.H2.apply_power(xd1),
                                                   v2.restrict(qbdae.blocks->H2.apply_power(v1.lift(xd1)))));
    worst_tensor = std::max(worst_tensor, rel_diff(dred.blocks.H1.apply_power(xd),
                                                   v1.restrict(qbdae.blocks->H1.apply_power(vfull.lift(xd)))));
    count += 6;

    Vector on_manifold(xd.size());
    on_manifold << xd1, dred.blocks.H2.apply_power(xd1);
    const Vector u = random_state(rng, dassembled.inputs());
    worst_sub = std::max(worst_sub, rel_diff(eval_polynomial_rhs(dsub, xd1, u),
                                             Vector(eval_rhs_qb(dassembled, on_manifold, u).head(dred.r1()))));
  }
  report(3, "projection identities", worst_tensor <= kProjectionTol && worst_sub <= kProjectionTol,
         "reduced tensors " + sci(worst_tensor) + " over " + std::to_string(count) + " products, substituted form " +
             sci(worst_sub) + " (tol " + sci(kProjectionTol) + ")");
}

// ---------------------------------------------------------------- Hopf regime

void hopf_regime(const TubularRun& steady, const TubularRun& cycle) {
  const double a_s = oscillation_amplitude(extract_qoi(steady.fom, "theta(1,t)"));
  const double a_c = oscillation_amplitude(extract_qoi(cycle.fom, "theta(1,t)"));
  report(4, "Hopf regime", a_s < kSteadyAmplitude && a_c > kCycleAmplitude,
         "theta(1,t) amplitude D=0.162 " + sci(a_s) + " (< " + sci(kSteadyAmplitude) + "), D=0.167 " + sci(a_c) +
             " (> " + sci(kCycleAmplitude) + ")");
}

// ---------------------------------------------------------------- error levels

TubularExperimentConfig qbdae_point(double damkohler) {
  TubularExperimentConfig cfg;
  cfg.model.damkohler = damkohler;
  cfg.quartic_ranks = {};
  cfg.qbdae_r1 = {6};
  cfg.qbdae_r2 = {3};
  cfg.deim_ranks = {};
  cfg.pod_ranks = {};
  cfg.qoi_r1 = 6;
  cfg.qoi_r2 = 3;
  return cfg;
}

double row_error(const ExperimentResult& res, const std::string& method, Index r1, Index r2) {
  for (const auto& row : res.rows) {
    if (row.method == method && row.r1 == r1 && row.r2 == r2) return row.error;
  }
  return INFINITY;
}

void error_levels() {
  const double e_s = row_error(run_tubular_experiment(qbdae_point(0.162)), "qbdae", 30, 9);
  const double e_c = row_error(run_tubular_experiment(qbdae_point(0.167)), "qbdae", 30, 9);
  const double f_s = std::max(e_s / kStableTarget, kStableTarget / e_s);
  const double f_c = std::max(e_c / kUnstableTarget, kUnstableTarget / e_c);
  report(5, "QB-DAE ROM error level (r1 = 30, r2 = 9)", f_s <= kTargetFactor && f_c <= kTargetFactor,
         "D=0.162 " + sci(e_s) + " vs " + sci(kStableTarget) + " (factor " + sci(f_s) + "), D=0.167 " + sci(e_c) +
             " vs " + sci(kUnstableTarget) + " (factor " + sci(f_c) + "), allowed factor " + sci(kTargetFactor));
}

// ---------------------------------------------------------------- curve shapes

using Curve = std::vector<std::pair<Index, double>>;

Curve curve(const ExperimentResult& res, const std::string& method, Index r_deim = -1) {
  Curve c;
  for (const auto& row : res.rows) {
    if (row.method != method) continue;
    if (r_deim >= 0 && row.r_deim != r_deim) continue;
    c.emplace_back(row.r1, row.error);
  }
  std::sort(c.begin(), c.end());
  return c;
}

/// Plateau level of a curve, or NaN when its tail is not flat or not finite.
double plateau(const Curve& c, std::string& why) {
  if (static_cast<Index>(c.size()) < kTailPoints) {
    why = "too few points";
    return NAN;
  }
  double lo = INFINITY, hi = 0.0;
  for (auto it = c.end() - kTailPoints; it != c.end(); ++it) {
    lo = std::min(lo, it->second);
    hi = std::max(hi, it->second);
  }
  if (!std::isfinite(hi)) {
    why = "non-finite tail";
    return NAN;
  }
  if (hi / lo > kFlatRatio) {
    why = "tail spread " + sci(hi / lo);
    return NAN;
  }
  return lo;
}

/// Empty when the curve keeps decreasing until saturation.
std::string decreasing_defect(const Curve& c) {
  if (c.size() < 2) return "too few points";
  for (const auto& [r, e] : c) {
    if (!std::isfinite(e)) return "non-finite error at r=" + std::to_string(r);
  }
  for (std::size_t i = 1; i < c.size(); ++i) {
    if (c[i - 1].second <= kSaturation) break;
    if (c[i].second > kMonotoneSlack * c[i - 1].second) {
      return "rise at r=" + std::to_string(c[i].first) + " (" + sci(c[i - 1].second) + " -> " + sci(c[i].second) + ")";
    }
  }
  if (c.back().second > kDecreaseFactor * c.front().second) {
    return "last/first " + sci(c.back().second / c.front().second);
  }
  return {};
}

struct ShapeResult {
  bool pass = true;
  std::string detail;
};

ShapeResult deim_plateaus(const ExperimentResult& res, const std::vector<Index>& sizes, const std::string& tag) {
  ShapeResult out;
  double previous = INFINITY;
  for (Index m : sizes) {
    std::string why;
    const double p = plateau(curve(res, "pod-deim", m), why);
    out.detail += " " + tag + " r_deim=" + std::to_string(m) + " ";
    if (std::isnan(p)) {
      out.pass = false;
      out.detail += "no plateau (" + why + ")";
      continue;
    }
    out.detail += "plateau " + sci(p);
    if (!(p < previous)) {
      out.pass = false;
      out.detail += " not below previous";
    }
    previous = p;
  }
  return out;
}

ShapeResult decreasing(const Curve& c, const std::string& tag) {
  const std::string d = decreasing_defect(c);
  if (d.empty()) return {true, " " + tag + " decreasing to " + sci(c.back().second)};
  return {false, " " + tag + " " + d};
}

void curve_shapes(const ExperimentResult& fhn, const ExperimentResult& tub, const FHNExperimentConfig& fcfg,
                  const TubularExperimentConfig& tcfg) {
  const ShapeResult a = deim_plateaus(fhn, fcfg.r_deim, "fhn");
  const ShapeResult b = deim_plateaus(tub, tcfg.r_deim, "tubular");
  const ShapeResult c = decreasing(curve(fhn, "qb-pod"), "fhn qb-pod");
  const ShapeResult d = decreasing(curve(tub, "quartic"), "tubular quartic");
  report(6, "DEIM plateaus and lifted-POD decrease", a.pass && b.pass && c.pass && d.pass,
         "flat ratio " + sci(kFlatRatio) + " over last " + std::to_string(kTailPoints) + ";" + a.detail + ";" +
             b.detail + ";" + c.detail + ";" + d.detail);
}

// ---------------------------------------------------------------- singular values

void singular_values(const ExperimentResult& fhn) {
  Vector sv, sz;
  for (const auto& [name, s] : fhn.sigma) {
    if (name == "v") sv = s / s[0];
    if (name == "z") sz = s / s[0];
  }
  double worst = 0.0;
  Index compared = 0, worst_index = 0;
  for (Index i = 0; i < std::min(sv.size(), sz.size()); ++i) {
    if (sv[i] < kSigmaFloor || sz[i] < kSigmaFloor) break;
    const double d = std::abs(sv[i] - sz[i]);
    if (d > worst) {
      worst = d;
      worst_index = i + 1;
    }
    ++compared;
  }
  report(7, "v and z singular-value decay", worst <= kSigmaTol && compared > 0,
         "max |sigma_v/sigma_v1 - sigma_z/sigma_z1| " + sci(worst) + " at index " + std::to_string(worst_index) +
             " over " + std::to_string(compared) + " values above " + sci(kSigmaFloor) + " (tol " + sci(kSigmaTol) + ")");
}

// ---------------------------------------------------------------- invariants

void invariants() {
  const auto scratch = std::filesystem::temp_directory_path() / "liftrom_acceptance_invariants";
  const auto results = cli::run_invariant_suite(0, scratch);
  std::filesystem::remove_all(scratch);
  bool pass = true;
  std::string detail;
  for (const auto& r : results) {
    pass = pass && r.pass;
    detail += (detail.empty() ? "" : ", ") + r.name + " " + sci(r.value) + (r.pass ? "" : " FAILED");
  }
  report(8, "property suites", pass, detail);
}

}  // namespace

int main() {
  set_log_level("error");
  scalar_lifting();

  const FhnRun fhn = run_fhn();
  const TubularRun steady = run_tubular(0.162);
  const TubularRun cycle = run_tubular(0.167);
  benchmark_lifting(fhn, steady, cycle);
  projection_identities(fhn, steady);
  hopf_regime(steady, cycle);
  error_levels();

  const FHNExperimentConfig fcfg;
  TubularExperimentConfig tcfg;
  tcfg.qbdae_r1 = {};
  tcfg.pod_ranks = {};
  const ExperimentResult fres = run_fhn_experiment(fcfg);
  const ExperimentResult tres = run_tubular_experiment(tcfg);
  curve_shapes(fres, tres, fcfg, tcfg);
  singular_values(fres);
  invariants();

  int failed = 0;
  for (const auto& o : outcomes) failed += o.pass ? 0 : 1;
  std::printf("%d of %zu criteria passed\n", static_cast<int>(outcomes.size()) - failed, outcomes.size());
  return failed == 0 ? 0 : 1;
}
