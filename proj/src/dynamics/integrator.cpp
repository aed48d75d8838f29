#include "liftrom/dynamics/integrator.hpp"

#include "liftrom/errors.hpp"

#include <Eigen/LU>
#include <Eigen/SparseLU>
#include <array>
#include <cmath>
#include <limits>

namespace liftrom {

Scheme parse_scheme(const std::string& name) {
  if (name == "semi-implicit") return Scheme::SemiImplicit;
  if (name == "implicit") return Scheme::Implicit;
  if (name == "rk4") return Scheme::RK4;
  throw ConfigError("unknown integrator scheme '" + name + "' (semi-implicit, implicit, rk4)");
}

std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::SemiImplicit: return "semi-implicit";
    case Scheme::Implicit: return "implicit";
    case Scheme::RK4: return "rk4";
  }
  return "?";
}

int scheme_order(Scheme s) {
  switch (s) {
    case Scheme::SemiImplicit: return 1;
    case Scheme::Implicit: return 4;
    case Scheme::RK4: return 4;
  }
  return 0;
}

std::vector<double> uniform_grid(double t_begin, double t_end, Index count) {
  std::vector<double> g(static_cast<std::size_t>(count));
  for (Index i = 1; i <= count; ++i) {
    g[static_cast<std::size_t>(i - 1)] =
        t_begin + static_cast<double>(i) * (t_end - t_begin) / static_cast<double>(count);
  }
  return g;
}

namespace {

// Hairer & Wanner, Solving ODEs II, Table IV.6.5 (L-stable, stiffly accurate).
constexpr double kGamma = 0.25;
constexpr std::array<double, 5> kC = {0.25, 0.75, 11.0 / 20.0, 0.5, 1.0};
constexpr std::array<std::array<double, 4>, 5> kA = {{
    {0.0, 0.0, 0.0, 0.0},
    {0.5, 0.0, 0.0, 0.0},
    {17.0 / 50.0, -1.0 / 25.0, 0.0, 0.0},
    {371.0 / 1360.0, -137.0 / 2720.0, 15.0 / 544.0, 0.0},
    {25.0 / 24.0, -49.0 / 48.0, 125.0 / 16.0, -85.0 / 12.0},
}};

double inf_norm(const Vector& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

/// Factorized E - c J (or E - c L) in dense or sparse form.
class IterationMatrix {
 public:
  IterationMatrix(const OdeModel& model, bool dense) : model_(model), dense_(dense) {}

  bool dense() const { return dense_; }

  void factor_dense(const Matrix& jac, double c) {
    Matrix m = -c * jac;
    if (const SparseMatrix* e = model_.mass()) {
      m += Matrix(*e);
    } else {
      m.diagonal().array() += 1.0;
    }
    lu_.compute(m);
    if (!std::isfinite(lu_.rcond()) || lu_.rcond() < std::numeric_limits<double>::epsilon() * 1e-2) {
      failed_ = true;
      return;
    }
    failed_ = false;
  }

  void factor_sparse(const SparseMatrix& jac, double c) {
    SparseMatrix m = -c * jac;
    if (const SparseMatrix* e = model_.mass()) {
      m += *e;
    } else {
      SparseMatrix id(m.rows(), m.cols());
      id.setIdentity();
      m += id;
    }
    m.makeCompressed();
    slu_.compute(m);
    failed_ = slu_.info() != Eigen::Success;
  }

  bool failed() const { return failed_; }

  Vector solve(const Vector& r) const {
    if (dense_) return lu_.solve(r);
    return slu_.solve(r);
  }

 private:
  const OdeModel& model_;
  bool dense_;
  bool failed_ = true;
  Eigen::PartialPivLU<Matrix> lu_;
  Eigen::SparseLU<SparseMatrix> slu_;
};

class Stepper {
 public:
  Stepper(const OdeModel& model, const IntegratorOptions& opts, IntegratorStats& stats)
      : model_(model), opts_(opts), stats_(stats), iter_(model, model.prefers_dense()) {}

  void step(double t, double h, Vector& x, long index) {
    switch (opts_.scheme) {
      case Scheme::SemiImplicit: semi_implicit(t, h, x, index); break;
      case Scheme::Implicit: sdirk(t, h, x, index); break;
      case Scheme::RK4: rk4(t, h, x, index); break;
    }
    ++stats_.steps;
    if (!x.allFinite()) throw IntegrationError("non-finite state", index);
  }

 private:
  Vector apply_mass(const Vector& v) const {
    if (const SparseMatrix* e = model_.mass()) return *e * v;
    return v;
  }

  Vector eval(double t, const Vector& x) const {
    Vector f;
    model_.rhs(t, x, f);
    ++stats_.rhs_evals;
    return f;
  }

  // ---- semi-implicit Euler ----
  void semi_implicit(double t, double h, Vector& x, long index) {
    const SparseMatrix* lin = model_.linear_part();
    if (!lin) throw Error("semi-implicit scheme needs a model with a linear part");
    if (h != factored_c_) {
      if (iter_.dense()) {
        iter_.factor_dense(Matrix(*lin), h);
      } else {
        iter_.factor_sparse(*lin, h);
      }
      ++stats_.factorizations;
      factored_c_ = h;
      if (iter_.failed()) throw IntegrationError("singular iteration matrix", index);
    }
    Vector f = eval(t, x);
    f.noalias() -= *lin * x;
    x = iter_.solve(apply_mass(x) + h * f);
  }

  // ---- explicit RK4 ----
  Vector slope(double t, const Vector& x, long index) {
    Vector f = eval(t, x);
    if (!model_.mass()) return f;
    if (factored_c_ != 0.0) {
      if (iter_.dense()) {
        iter_.factor_dense(Matrix::Zero(model_.dim(), model_.dim()), 0.0);
      } else {
        iter_.factor_sparse(SparseMatrix(model_.dim(), model_.dim()), 0.0);
      }
      ++stats_.factorizations;
      factored_c_ = 0.0;
      if (iter_.failed()) throw IntegrationError("singular mass matrix", index);
    }
    return iter_.solve(f);
  }

  void rk4(double t, double h, Vector& x, long index) {
    const Vector k1 = slope(t, x, index);
    const Vector k2 = slope(t + 0.5 * h, x + 0.5 * h * k1, index);
    const Vector k3 = slope(t + 0.5 * h, x + 0.5 * h * k2, index);
    const Vector k4 = slope(t + h, x + h * k3, index);
    x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }

  // ---- SDIRK4 with damped modified Newton ----
  void refresh_jacobian(double t, const Vector& y) {
    if (iter_.dense()) {
      model_.jacobian_dense(t, y, jac_dense_);
    } else {
      model_.jacobian_sparse(t, y, jac_sparse_);
    }
    ++stats_.jacobian_evals;
    have_jacobian_ = true;
    factored_c_ = std::numeric_limits<double>::quiet_NaN();
  }

  void ensure_factored(double c, long index) {
    if (c == factored_c_) return;
    if (iter_.dense()) {
      iter_.factor_dense(jac_dense_, c);
    } else {
      iter_.factor_sparse(jac_sparse_, c);
    }
    ++stats_.factorizations;
    factored_c_ = c;
    if (iter_.failed()) throw IntegrationError("singular Newton iteration matrix", index);
  }

  // E (y - z) - c f(t, y); false if f is not finite or outside its domain.
  bool residual(double t, const Vector& y, const Vector& z, double c, Vector& r) const {
    try {
      r = apply_mass(y - z) - c * eval(t, y);
    } catch (const DomainError&) {
      return false;
    }
    return r.allFinite();
  }

  Vector solve_stage(double t, const Vector& z, double c, Vector y, long index,
                     bool& fresh) {
    Vector r;
    if (!residual(t, y, z, c, r)) {
      y = z;
      if (!residual(t, y, z, c, r)) throw IntegrationError("non-finite right-hand side", index);
    }
    double rn = inf_norm(r);
    int slow = 0;
    for (int it = 0;; ++it) {
      const double scale = std::max(1.0, inf_norm(y));
      if (rn <= opts_.newton_tol * scale) return y;
      if (it >= opts_.max_newton_iterations) {
        throw IntegrationError("Newton iteration did not converge", index);
      }
      if (!fresh && slow >= opts_.slow_newton_iterations) {
        refresh_jacobian(t, y);
        fresh = true;
      }
      ensure_factored(c, index);
      const Vector delta = iter_.solve(-r);
      ++stats_.newton_iterations;
      ++slow;

      double lambda = 1.0;
      Vector trial, rt;
      bool accepted = false;
      for (int k = 0; k <= opts_.max_damping_halvings; ++k) {
        trial = y + lambda * delta;
        if (residual(t, trial, z, c, rt) && inf_norm(rt) < rn) {
          accepted = true;
          break;
        }
        lambda *= opts_.damping;
      }
      if (!accepted) {
        if (lambda * inf_norm(delta) <= 4 * std::numeric_limits<double>::epsilon() * scale &&
            residual(t, y + delta, z, c, rt)) {
          return y + delta;  // stalled at round-off level
        }
        if (fresh) throw IntegrationError("damped Newton failed to reduce the residual", index);
        refresh_jacobian(t, y);
        fresh = true;
        continue;
      }
      y = std::move(trial);
      r = std::move(rt);
      rn = inf_norm(r);
    }
  }

  void sdirk(double t, double h, Vector& x, long index) {
    const double c = h * kGamma;
    bool fresh = false;
    if (!have_jacobian_ || !opts_.reuse_jacobian) {
      refresh_jacobian(t, x);
      fresh = true;
    }
    if (last_k_.size() != x.size()) last_k_ = Vector::Zero(x.size());
    std::array<Vector, 5> k;
    Vector y;
    for (std::size_t i = 0; i < 5; ++i) {
      Vector z = x;
      for (std::size_t j = 0; j < i; ++j) z.noalias() += (h * kA[i][j]) * k[j];
      const Vector& guess_slope = i == 0 ? last_k_ : k[i - 1];
      y = solve_stage(t + kC[i] * h, z, c, z + c * guess_slope, index, fresh);
      k[i] = (y - z) / c;
    }
    last_k_ = k[4];
    x = std::move(y);
  }

  const OdeModel& model_;
  const IntegratorOptions& opts_;
  IntegratorStats& stats_;
  IterationMatrix iter_;
  double factored_c_ = std::numeric_limits<double>::quiet_NaN();
  bool have_jacobian_ = false;
  Matrix jac_dense_;
  SparseMatrix jac_sparse_;
  Vector last_k_;
};

}  // namespace

Trajectory integrate_ode(const OdeModel& model, const Vector& x0, double t0,
                         std::span<const double> times, const IntegratorOptions& opts,
                         IntegratorStats* stats) {
  if (x0.size() != model.dim()) throw DimensionError("integrate_ode: x0 has wrong dimension");
  if (!x0.allFinite()) throw IntegrationError("non-finite initial state", 0);
  if (!(opts.dt > 0.0)) throw ConfigError("integrate_ode: dt must be positive");
  IntegratorStats local;
  IntegratorStats& st = stats ? *stats : local;

  Trajectory traj;
  traj.times.assign(times.begin(), times.end());
  traj.states.resize(model.dim(), static_cast<Index>(times.size()));

  Stepper stepper(model, opts, st);
  Vector x = x0;
  double t = t0;
  long index = 0;
  for (std::size_t j = 0; j < times.size(); ++j) {
    const double target = times[j];
    if (target < t) throw DimensionError("integrate_ode: output times must be nondecreasing and >= t0");
    const double span = target - t;
    if (span > 0.0) {
      const long nsub = std::max(1L, static_cast<long>(std::ceil(span / opts.dt - 1e-9)));
      const double h = span / static_cast<double>(nsub);
      for (long s = 0; s < nsub; ++s) {
        ++index;
        stepper.step(t + static_cast<double>(s) * h, h, x, index);
      }
    }
    t = target;
    traj.states.col(static_cast<Index>(j)) = x;
  }
  return traj;
}

}  // namespace liftrom
