#pragma once

#include "liftrom/dynamics/general_system.hpp"
#include "liftrom/dynamics/systems.hpp"

namespace liftrom {

struct FHNConfig {
  double l = 1.0;
  double c = 0.05;
  double gamma = 2.0;
  double h = 0.5;
  double epsilon = 0.015;
  Index n = 512;
  double t_f = 12.0;
  /// a2 in -v^3 + a2 v^2 - 0.1 v.
  double quadratic_coeff = 1.1;
  /// Use E = eps * I for every block instead of leaving w unscaled.
  bool uniform_mass = false;

  double ds() const { return l / static_cast<double>(n - 1); }
  void validate() const;
};

/// u(t) = 5e4 t^3 exp(-15 t).
double fhn_forcing(double t);
/// Two channels: [u(t), 1].
InputSignal fhn_input();

/// Second-difference matrix on n nodes (both ends included) with
/// zero-flux ghost points folded in.
SparseMatrix neumann_laplacian(Index n, double ds);

/// State [v; w].
GeneralNonlinearSystem build_fhn_fom(const FHNConfig& cfg);
/// State [v; w; z], z = v^2.
QBSystem build_fhn_lifted_qb(const FHNConfig& cfg);

/// [v0; w0; v0^2].
Vector fhn_lift_ic(const Vector& v0, const Vector& w0);

}  // namespace liftrom
