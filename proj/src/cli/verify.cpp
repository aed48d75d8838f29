#include "liftrom/cli/verify.hpp"

#include "liftrom/bench/metrics.hpp"
#include "liftrom/cli/commands.hpp"
#include "liftrom/cli/config.hpp"
#include "liftrom/dynamics/qbdae_solver.hpp"
#include "liftrom/errors.hpp"
#include "liftrom/models/fhn.hpp"
#include "liftrom/models/tubular.hpp"
#include "liftrom/reduction/deim.hpp"
#include "liftrom/reduction/pod.hpp"
#include "liftrom/reduction/projection.hpp"
#include "liftrom/reduction/reduced_systems.hpp"
#include "liftrom/reduction/snapshots.hpp"
#include "liftrom/tensor/kron.hpp"
#include "liftrom/tensor/linalg.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

namespace liftrom::cli {

namespace fs = std::filesystem;

namespace {

struct Instances {
  FHNConfig fhn;
  TubularConfig tub;
  Trajectory fhn_lifted;  ///< lifted FHN snapshots with the initial state
  Trajectory tub_lifted;  ///< QB-DAE-lifted reactor snapshots with the initial state
  QBSystem fhn_qb;
  QuarticSystem tub_quartic;
  QBSystem tub_qbdae;
  GeneralNonlinearSystem tub_fom;
  Trajectory tub_train;
};

Instances build_instances() {
  Instances in;
  in.fhn.n = 48;
  in.fhn.t_f = 4.0;
  in.tub.n = 20;
  in.tub.t_f = 2.0;
  in.tub.damkohler = 0.167;

  const GeneralNonlinearSystem fhn_fom = build_fhn_fom(in.fhn);
  in.fhn_qb = build_fhn_lifted_qb(in.fhn);
  const auto fhn_grid = uniform_grid(0.0, in.fhn.t_f, 80);
  Trajectory fhn_traj =
      integrate_ode(GeneralModel(fhn_fom, fhn_input()), Vector::Zero(fhn_fom.dim()), 0.0, fhn_grid);
  fhn_traj.layout = fhn_fom.layout;
  const Index nf = in.fhn.n;
  in.fhn_lifted = map_columns(prepend_state(fhn_traj, 0.0, Vector::Zero(fhn_fom.dim())),
                              in.fhn_qb.layout,
                              [nf](const Vector& x) { return fhn_lift_ic(x.head(nf), x.tail(nf)); });

  in.tub_fom = build_tubular_fom(in.tub);
  in.tub_quartic = build_tubular_quartic(in.tub);
  in.tub_qbdae = build_tubular_qbdae(in.tub);
  const auto tub_grid = uniform_grid(0.0, in.tub.t_f, 100);
  const Vector x0 = tubular_initial_state(in.tub);
  Trajectory tub_traj = integrate_ode(GeneralModel(in.tub_fom, tubular_input()), x0, 0.0, tub_grid);
  tub_traj.layout = in.tub_fom.layout;
  in.tub_train = prepend_state(tub_traj, 0.0, x0);
  const Index nt = in.tub.n;
  const double gamma = in.tub.gamma;
  in.tub_lifted = map_columns(in.tub_train, in.tub_qbdae.layout, [nt, gamma](const Vector& x) {
    return tubular_qbdae_ic(x.head(nt), x.tail(nt), gamma);
  });
  return in;
}

CheckResult make(const std::string& name, double value, double tol, std::string detail = {}) {
  return {name, value, tol, value <= tol, std::move(detail)};
}

CheckResult pod_orthonormality(const Instances& in) {
  double worst = 0.0;
  Index blocks = 0;
  for (const Trajectory* tr : {&in.fhn_lifted, &in.tub_lifted}) {
    const PODBasis pod = compute_full_pod(collect_snapshots(*tr, tr->steps()));
    for (const auto& b : pod.blocks) {
      worst = std::max(worst, orthonormality_defect(b.basis));
      ++blocks;
    }
  }
  return make("pod_orthonormality", worst, 1e-12, std::to_string(blocks) + " variable bases");
}

CheckResult constraint_residuals(const Instances& in) {
  const QBBlocks& b = *in.tub_qbdae.blocks;
  double worst = 0.0;
  auto update = [&](const Vector& x) {
    const Vector r = algebraic_residual(b, x);
    worst = std::max(worst, r.lpNorm<Eigen::Infinity>() /
                                std::max(1.0, x.tail(b.n2).lpNorm<Eigen::Infinity>()));
  };
  for (Index j = 0; j < in.tub_lifted.steps(); ++j) update(in.tub_lifted.states.col(j));
  const Vector s0 = tubular_initial_state(in.tub);
  const Index n = in.tub.n;
  const Vector x1_0 = tubular_quartic_ic(s0.head(n), s0.tail(n), in.tub.gamma);
  const Trajectory dae = solve_qbdae(in.tub_qbdae, x1_0, tubular_input(), 0.0,
                                     uniform_grid(0.0, 0.5, 10));
  for (Index j = 0; j < dae.steps(); ++j) update(dae.states.col(j));
  return make("algebraic_constraint_residual", worst, 1e-12,
              std::to_string(in.tub_lifted.steps() + dae.steps()) + " states");
}

CheckResult deim_exactness(const Instances& in, std::mt19937_64& rng) {
  const Matrix gs = nonlinear_snapshots(*in.tub_fom.g, in.tub_train, in.tub_train.steps());
  const DEIMOperator deim = deim_build(gs, 8);
  std::normal_distribution<double> nd(0.0, 1.0);
  double worst = 0.0;
  auto check = [&](const Vector& f) {
    const Vector fa = deim.approximate(f);
    for (Index i : deim.indices) {
      worst = std::max(worst, std::abs(fa[i] - f[i]) / std::max(1.0, f.lpNorm<Eigen::Infinity>()));
    }
  };
  for (Index j = 0; j < gs.cols(); ++j) check(gs.col(j));
  for (int k = 0; k < 20; ++k) {
    Vector f(gs.rows());
    for (Index i = 0; i < f.size(); ++i) f[i] = nd(rng);
    check(f);
  }
  return make("deim_interpolation_exactness", worst, 1e-12,
              std::to_string(deim.size()) + " interpolation points");
}

CheckResult kronecker_oracle(const Instances& in, std::mt19937_64& rng) {
  std::vector<std::pair<std::string, MatricizedTensor>> tensors;
  auto add_poly = [&tensors](const std::string& tag, const PolynomialSystem& s) {
    for (std::size_t i = 0; i < s.tensors.size(); ++i) {
      tensors.emplace_back(tag + ".tensor" + std::to_string(i), s.tensors[i]);
    }
    for (std::size_t i = 0; i < s.input_tensors.size(); ++i) {
      tensors.emplace_back(tag + ".input_tensor" + std::to_string(i), s.input_tensors[i].op);
    }
  };
  // Tiny full-order instances keep the dimension products under the cap.
  FHNConfig fhn = in.fhn;
  fhn.n = 8;
  TubularConfig tub = in.tub;
  tub.n = 4;
  const QBSystem fqb = build_fhn_lifted_qb(fhn);
  add_poly("fhn_qb", fqb.to_polynomial());
  add_poly("tubular_quartic", build_tubular_quartic(tub).to_polynomial());
  const QBSystem tq = build_tubular_qbdae(tub);
  tensors.emplace_back("tubular_qbdae.H1", tq.blocks->H1);
  tensors.emplace_back("tubular_qbdae.H2", tq.blocks->H2);

  // Reduced instances from the snapshot bases.
  const PODBasis fpod = compute_full_pod(collect_snapshots(in.fhn_lifted, in.fhn_lifted.steps()));
  const ProjectionBasis vf(in.fhn_qb.layout, truncate_pod(fpod, std::map<std::string, Index>{
                                                                    {"v", 3}, {"w", 3}, {"z", 3}}));
  add_poly("fhn_qb_rom", project_qb(in.fhn_qb, vf).to_polynomial());
  const std::vector<std::string> x1 = {"psi", "theta", "w1", "w2", "w3"};
  const PODBasis tpod = compute_full_pod(collect_snapshots(in.tub_lifted, in.tub_lifted.steps()));
  std::map<std::string, Index> r2;
  for (const auto& n : x1) r2[n] = 2;
  const ProjectionBasis vq(in.tub_quartic.layout, truncate_pod(tpod, r2));
  add_poly("tubular_quartic_rom", project_quartic(in.tub_quartic, vq).to_polynomial());
  const auto [l1, l2] = split_layout(in.tub_qbdae.layout, in.tub_qbdae.blocks->n1);
  const ProjectionBasis v1(l1, truncate_pod(tpod, r2));
  const ProjectionBasis v2(l2, truncate_pod(tpod, std::map<std::string, Index>{
                                                      {"w4", 2}, {"w5", 2}, {"w6", 2}}));
  const ReducedQBDAE rq = precompute_substituted_ode(project_qbdae(in.tub_qbdae, v1, v2));
  tensors.emplace_back("tubular_qbdae_rom.H1", rq.blocks.H1);
  tensors.emplace_back("tubular_qbdae_rom.H2", rq.blocks.H2);
  add_poly("tubular_qbdae_rom.substituted", rq.substituted_system());

  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto random = [&](Index n) {
    Vector v(n);
    for (Index i = 0; i < n; ++i) v[i] = u(rng);
    return v;
  };
  double worst = 0.0;
  int checked = 0;
  std::string worst_name;
  for (const auto& [name, t] : tensors) {
    if (t.flat_size() > 10'000) continue;
    const Matrix dense = t.to_dense();
    for (int trial = 0; trial < 3; ++trial) {
      std::vector<Vector> xs;
      for (Index d : t.in_dims()) xs.push_back(random(d));
      Vector k = xs[0];
      for (std::size_t i = 1; i < xs.size(); ++i) k = kron_vec(k, xs[i]);
      const Vector ref = dense * k;
      const double scale = std::max(1.0, ref.lpNorm<Eigen::Infinity>());
      double err = (t.apply(xs) - ref).lpNorm<Eigen::Infinity>() / scale;
      const bool square = std::all_of(t.in_dims().begin(), t.in_dims().end(),
                                      [&](Index d) { return d == t.in_dims()[0]; });
      if (square) {
        const Vector x = xs[0];
        const Vector refp = dense * kron_power(x, t.order());
        err = std::max(err, (t.apply_power(x) - refp).lpNorm<Eigen::Infinity>() /
                                std::max(1.0, refp.lpNorm<Eigen::Infinity>()));
      }
      if (err > worst) {
        worst = err;
        worst_name = name;
      }
    }
    ++checked;
  }
  return make("dense_kronecker_oracle", worst, 1e-12,
              std::to_string(checked) + " tensors" + (worst_name.empty() ? "" : ", worst " + worst_name));
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

CheckResult cli_determinism(const fs::path& scratch) {
  const nlohmann::json doc = {
      {"model", "fhn"},
      {"form", "lifted-qb"},
      {"snapshots", 40},
      {"fhn", {{"n", 32}, {"t_f", 2.0}}},
      {"reduction", {{"method", "pod"}, {"r", 3}, {"training", 30}}}};
  const RunConfig cfg = parse_config(doc);
  const fs::path a = scratch / "determinism_a", b = scratch / "determinism_b";
  fs::remove_all(a);
  fs::remove_all(b);
  cmd_simulate_rom(cfg, a);
  cmd_simulate_rom(cfg, b);
  cmd_simulate(cfg, a / "simulate");
  cmd_simulate(cfg, b / "simulate");
  Index files = 0, differing = 0;
  for (const auto& entry : fs::recursive_directory_iterator(a)) {
    if (!entry.is_regular_file()) continue;
    const fs::path rel = fs::relative(entry.path(), a);
    ++files;
    if (!fs::exists(b / rel) || slurp(entry.path()) != slurp(b / rel)) ++differing;
  }
  return make("cli_artifact_determinism", static_cast<double>(differing), 0.0,
              std::to_string(files) + " files compared");
}

}  // namespace

std::vector<CheckResult> run_invariant_suite(std::uint64_t seed, const fs::path& scratch) {
  std::mt19937_64 rng(seed);
  const Instances in = build_instances();
  std::vector<CheckResult> out;
  out.push_back(pod_orthonormality(in));
  out.push_back(constraint_residuals(in));
  out.push_back(deim_exactness(in, rng));
  out.push_back(kronecker_oracle(in, rng));
  fs::create_directories(scratch);
  out.push_back(cli_determinism(scratch));
  return out;
}

int cmd_verify(std::uint64_t seed, const fs::path& out) {
  const fs::path scratch = out.empty() ? fs::temp_directory_path() / "liftrom_verify" : out / "scratch";
  const std::vector<CheckResult> results = run_invariant_suite(seed, scratch);
  int failed = 0;
  std::string csv = "check,value,tolerance,pass,detail\n";
  for (const auto& r : results) {
    std::printf("%s %s value=%s tol=%s (%s)\n", r.pass ? "PASS" : "FAIL", r.name.c_str(),
                format_double(r.value).c_str(), format_double(r.tolerance).c_str(), r.detail.c_str());
    csv += r.name + "," + format_double(r.value) + "," + format_double(r.tolerance) + "," +
           (r.pass ? "1" : "0") + "," + r.detail + "\n";
    if (!r.pass) ++failed;
  }
  if (out.empty()) {
    fs::remove_all(scratch);
  } else {
    std::ofstream os(out / "verify.csv", std::ios::binary);
    if (!os) throw ConfigError("cannot write " + (out / "verify.csv").string());
    os << csv;
  }
  return failed;
}

}  // namespace liftrom::cli
