#pragma once

#include "liftrom/dynamics/systems.hpp"

namespace liftrom::scalar_example {

/// x' = x^4 + u as a one-dimensional quartic system.
QuarticSystem quartic();
/// Four-state QB-ODE in [x, w1, w2, w3] = [x, x^2, x^4, x^3].
QBSystem qb_ode();
/// Two-state QB-DAE in [x, w1] with 0 = w1 - x^2.
QBSystem qb_dae();

Vector qb_ode_state(double x);
Vector qb_dae_state(double x);

/// Solution of x' = x^4 from x(0) = x0.
double analytic(double x0, double t);

}  // namespace liftrom::scalar_example
