#pragma once

#include "liftrom/dynamics/general_system.hpp"
#include "liftrom/dynamics/systems.hpp"

#include <filesystem>

namespace liftrom {

enum class Convection { Upwind, Central };

struct TubularConfig {
  double pe = 5.0;
  double damkohler = 0.167;
  double b_const = 0.5;
  double beta = 2.5;
  double gamma = 25.0;
  double theta_ref = 1.0;
  double mu = 1.0;
  Index n = 100;
  double t_f = 30.0;
  Convection convection = Convection::Upwind;
  /// Initial profiles on the grid; empty means identically one.
  Vector psi0, theta0;

  double ds() const { return 1.0 / static_cast<double>(n); }
  void validate() const;
};

/// Linear transport operators with boundary conditions folded in:
/// psi' = A_psi psi + b_psi u, theta' = A_theta theta + b_theta u, u = 1.
struct TubularOperators {
  SparseMatrix a_psi, a_theta;
  Vector b_psi, b_theta;
};

/// Unknowns sit at s_i = i / n, i = 1..n; s_n = 1 is the reactor exit.
Vector tubular_grid(const TubularConfig& cfg);
TubularOperators tubular_operators(const TubularConfig& cfg);
InputSignal tubular_input();

/// State [psi; theta].
GeneralNonlinearSystem build_tubular_fom(const TubularConfig& cfg);
/// State [psi; theta; w1; w2; w3] with w1 = exp(gamma - gamma/theta), w2 = theta^-2, w3 = theta^-1.
QuarticSystem build_tubular_quartic(const TubularConfig& cfg);
/// x1 = [psi; theta; w1; w2; w3], x2 = [w4; w5; w6] = [psi w1; w2 w3; w1 w2].
QBSystem build_tubular_qbdae(const TubularConfig& cfg);

/// Initial FOM state from the configured profiles.
Vector tubular_initial_state(const TubularConfig& cfg);
Vector tubular_quartic_ic(const Vector& psi0, const Vector& theta0, double gamma);
Vector tubular_qbdae_ic(const Vector& psi0, const Vector& theta0, double gamma);

/// Piecewise-linear interpolation of an (s, value) CSV profile onto `grid`.
Vector read_profile_csv(const std::filesystem::path& path, const Vector& grid);

}  // namespace liftrom
