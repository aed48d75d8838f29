#pragma once

#include "liftrom/dynamics/layout.hpp"
#include "liftrom/types.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace liftrom {

/// Time grid plus an n x n_t state matrix; column j is the state at times[j].
struct Trajectory {
  std::vector<double> times;
  Matrix states;
  Layout layout;

  Index dim() const { return states.rows(); }
  Index steps() const { return states.cols(); }

  /// Rows of one named variable (n_var x n_t).
  Matrix variable(const std::string& name) const;
  /// Trajectory of the listed variables only, stacked in the given order.
  Trajectory restrict_to(const std::vector<std::string>& names) const;

  /// Header `t,<var>_<index>,...`; one row per time, full double precision.
  void write_csv(const std::filesystem::path& path) const;
};

}  // namespace liftrom
