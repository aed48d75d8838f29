#pragma once

#include "liftrom/types.hpp"

#include <string>

namespace liftrom {

enum class LiftKind { FhnQB, TubularQuartic, TubularQBDAE, ScalarQBODE, ScalarQBDAE };

LiftKind parse_lift_kind(const std::string& name);

/// Lifted initial state from the original one. The original state is
/// [v; w] for FHN, [psi; theta] for the reactor, [x] for the scalar example.
/// `gamma` is the Arrhenius constant and only used by the reactor kinds.
Vector consistent_lift_ic(LiftKind kind, const Vector& original, double gamma = 25.0);

}  // namespace liftrom
