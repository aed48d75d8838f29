#include "liftrom/models/lifting.hpp"

#include "liftrom/errors.hpp"
#include "liftrom/models/fhn.hpp"
#include "liftrom/models/scalar_example.hpp"
#include "liftrom/models/tubular.hpp"

namespace liftrom {

LiftKind parse_lift_kind(const std::string& name) {
  if (name == "fhn-qb") return LiftKind::FhnQB;
  if (name == "tubular-quartic") return LiftKind::TubularQuartic;
  if (name == "tubular-qbdae") return LiftKind::TubularQBDAE;
  if (name == "scalar-qbode") return LiftKind::ScalarQBODE;
  if (name == "scalar-qbdae") return LiftKind::ScalarQBDAE;
  throw ConfigError("unknown lift kind '" + name + "'");
}

Vector consistent_lift_ic(LiftKind kind, const Vector& original, double gamma) {
  auto halves = [&] {
    if (original.size() % 2 != 0) throw DimensionError("consistent_lift_ic: odd original dimension");
    return original.size() / 2;
  };
  switch (kind) {
    case LiftKind::FhnQB: {
      const Index n = halves();
      return fhn_lift_ic(original.head(n), original.tail(n));
    }
    case LiftKind::TubularQuartic: {
      const Index n = halves();
      return tubular_quartic_ic(original.head(n), original.tail(n), gamma);
    }
    case LiftKind::TubularQBDAE: {
      const Index n = halves();
      return tubular_qbdae_ic(original.head(n), original.tail(n), gamma);
    }
    case LiftKind::ScalarQBODE:
    case LiftKind::ScalarQBDAE:
      if (original.size() != 1) throw DimensionError("consistent_lift_ic: scalar example needs one state");
      return kind == LiftKind::ScalarQBODE ? scalar_example::qb_ode_state(original[0])
                                           : scalar_example::qb_dae_state(original[0]);
  }
  throw DimensionError("consistent_lift_ic: unknown kind");
}

}  // namespace liftrom
