#pragma once

#include "liftrom/dynamics/ode_model.hpp"
#include "liftrom/dynamics/trajectory.hpp"

#include <span>
#include <string>

namespace liftrom {

enum class Scheme {
  SemiImplicit,  ///< linearly implicit Euler: implicit in linear_part(), explicit in the rest
  Implicit,      ///< 5-stage L-stable SDIRK of order 4 with damped modified Newton
  RK4,           ///< classical explicit Runge-Kutta
};

Scheme parse_scheme(const std::string& name);
std::string to_string(Scheme s);
int scheme_order(Scheme s);

struct IntegratorOptions {
  Scheme scheme = Scheme::Implicit;
  /// Upper bound on the internal step; each output interval is split evenly.
  double dt = 1e-3;
  /// Newton stops once |R|_inf <= newton_tol * max(1, |x|_inf).
  double newton_tol = 1e-14;
  int max_newton_iterations = 50;
  double damping = 0.5;
  int max_damping_halvings = 10;
  /// Keep the iteration matrix across steps until Newton slows down.
  bool reuse_jacobian = true;
  int slow_newton_iterations = 4;
};

struct IntegratorStats {
  long steps = 0;
  long rhs_evals = 0;
  long jacobian_evals = 0;
  long factorizations = 0;
  long newton_iterations = 0;
};

/// Integrates E x' = f(t, x) from (t0, x0) and records the state at each
/// output time. Output times must be nondecreasing and >= t0; an output time
/// equal to t0 records x0.
Trajectory integrate_ode(const OdeModel& model, const Vector& x0, double t0,
                         std::span<const double> times, const IntegratorOptions& opts = {},
                         IntegratorStats* stats = nullptr);

/// Equidistant grid t_i = t_begin + i * (t_end - t_begin) / count, i = 1..count.
std::vector<double> uniform_grid(double t_begin, double t_end, Index count);

}  // namespace liftrom
