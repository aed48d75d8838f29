#include "liftrom/dynamics/trajectory.hpp"

#include "liftrom/errors.hpp"

#include <cstdio>
#include <fstream>

namespace liftrom {

Matrix Trajectory::variable(const std::string& name) const {
  const auto& b = layout.block(name);
  return states.middleRows(b.offset, b.size);
}

Trajectory Trajectory::restrict_to(const std::vector<std::string>& names) const {
  std::vector<Index> sizes;
  for (const auto& n : names) sizes.push_back(layout.block(n).size);
  Trajectory out;
  out.times = times;
  out.layout = Layout::sized(names, sizes);
  out.states.resize(out.layout.total(), steps());
  for (const auto& n : names) {
    out.states.middleRows(out.layout.block(n).offset, layout.block(n).size) = variable(n);
  }
  return out;
}

void Trajectory::write_csv(const std::filesystem::path& path) const {
  if (layout.total() != dim()) {
    throw DimensionError("Trajectory::write_csv: layout does not cover the state");
  }
  std::ofstream os(path);
  if (!os) throw Error("cannot open " + path.string() + " for writing");
  os << 't';
  for (const auto& b : layout.blocks()) {
    for (Index i = 0; i < b.size; ++i) os << ',' << b.name << '_' << i;
  }
  os << '\n';
  char buf[32];
  for (Index j = 0; j < steps(); ++j) {
    std::snprintf(buf, sizeof buf, "%.17g", times[static_cast<std::size_t>(j)]);
    os << buf;
    for (Index i = 0; i < dim(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", states(i, j));
      os << ',' << buf;
    }
    os << '\n';
  }
  if (!os) throw Error("write failed: " + path.string());
}

}  // namespace liftrom
