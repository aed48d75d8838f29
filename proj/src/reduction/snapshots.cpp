#include "liftrom/reduction/snapshots.hpp"

#include "liftrom/errors.hpp"

#include <cmath>

namespace liftrom {

namespace {

void check_window(const Trajectory& traj, Index count) {
  if (count <= 0) throw DimensionError("collect_snapshots: empty training window");
  if (count > traj.steps()) {
    throw DimensionError("collect_snapshots: window of " + std::to_string(count) +
                         " columns exceeds the " + std::to_string(traj.steps()) +
                         "-point grid");
  }
}

}  // namespace

Trajectory prepend_state(const Trajectory& traj, double t0, const Vector& x0) {
  if (x0.size() != traj.dim()) throw DimensionError("prepend_state: state length mismatch");
  Trajectory out;
  out.layout = traj.layout;
  out.times.reserve(traj.times.size() + 1);
  out.times.push_back(t0);
  out.times.insert(out.times.end(), traj.times.begin(), traj.times.end());
  out.states.resize(traj.dim(), traj.steps() + 1);
  out.states.col(0) = x0;
  out.states.rightCols(traj.steps()) = traj.states;
  return out;
}

Trajectory map_columns(const Trajectory& traj, const Layout& layout,
                       const std::function<Vector(const Vector&)>& f) {
  Trajectory out;
  out.times = traj.times;
  out.layout = layout;
  out.states.resize(layout.total(), traj.steps());
  for (Index j = 0; j < traj.steps(); ++j) out.states.col(j) = f(traj.states.col(j));
  return out;
}

const Matrix& SnapshotSet::block(const std::string& name) const {
  const auto& bs = layout.blocks();
  for (std::size_t i = 0; i < bs.size(); ++i) {
    if (bs[i].name == name) return blocks[i];
  }
  throw DimensionError("SnapshotSet: no variable '" + name + "'");
}

Matrix SnapshotSet::stacked() const {
  Matrix out(layout.total(), count());
  const auto& bs = layout.blocks();
  for (std::size_t i = 0; i < bs.size(); ++i) out.middleRows(bs[i].offset, bs[i].size) = blocks[i];
  return out;
}

SnapshotSet collect_snapshots(const Trajectory& traj, Index count) {
  return collect_snapshots(traj, traj.layout.names(), count);
}

SnapshotSet collect_snapshots(const Trajectory& traj, const std::vector<std::string>& names,
                              Index count) {
  check_window(traj, count);
  SnapshotSet s;
  s.times.assign(traj.times.begin(), traj.times.begin() + count);
  std::vector<Index> sizes;
  for (const auto& name : names) {
    const auto& b = traj.layout.block(name);
    s.blocks.push_back(traj.states.block(b.offset, 0, b.size, count));
    sizes.push_back(b.size);
  }
  s.layout = Layout::sized(names, sizes);
  return s;
}

Index window_count(const std::vector<double>& times, double t_end) {
  Index count = 0;
  for (double t : times) {
    if (t <= t_end + 1e-9 * std::max(1.0, std::abs(t_end))) ++count;
    else break;
  }
  return count;
}

Matrix nonlinear_snapshots(const ComponentNonlinearity& g, const Trajectory& traj, Index count) {
  check_window(traj, count);
  Matrix out(g.size(), count);
  for (Index j = 0; j < count; ++j) out.col(j) = g.evaluate(traj.states.col(j));
  return out;
}

}  // namespace liftrom
