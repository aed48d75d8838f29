#pragma once

#include "liftrom/dynamics/general_system.hpp"
#include "liftrom/dynamics/layout.hpp"
#include "liftrom/dynamics/trajectory.hpp"

#include <functional>
#include <string>
#include <vector>

namespace liftrom {

/// Per-variable snapshot matrices (n_var x M) on a shared time grid.
struct SnapshotSet {
  std::vector<double> times;
  Layout layout;
  std::vector<Matrix> blocks;  ///< in layout order

  Index count() const { return static_cast<Index>(times.size()); }
  const Matrix& block(const std::string& name) const;
  /// Columns stacked over all variables.
  Matrix stacked() const;
};

/// First `count` columns of a trajectory, split by its layout.
SnapshotSet collect_snapshots(const Trajectory& traj, Index count);
/// Only the listed variables.
SnapshotSet collect_snapshots(const Trajectory& traj, const std::vector<std::string>& names,
                              Index count);

/// The trajectory with (t0, x0) prepended as column 0.
Trajectory prepend_state(const Trajectory& traj, double t0, const Vector& x0);

/// Applies a per-column map, e.g. a lifting transformation, to a trajectory.
Trajectory map_columns(const Trajectory& traj, const Layout& layout,
                       const std::function<Vector(const Vector&)>& f);

/// Number of leading grid points with t <= t_end (within 1e-9 relative).
Index window_count(const std::vector<double>& times, double t_end);

/// g(x(t_i)) for the first `count` columns of a trajectory.
Matrix nonlinear_snapshots(const ComponentNonlinearity& g, const Trajectory& traj, Index count);

}  // namespace liftrom
