#include "liftrom/reduction/pod.hpp"

#include "liftrom/errors.hpp"
#include "liftrom/tensor/linalg.hpp"

#include <numeric>
#include <set>

namespace liftrom {

const PODBlock& PODBasis::block(const std::string& name) const {
  for (const auto& b : blocks) {
    if (b.name == name) return b;
  }
  throw DimensionError("PODBasis: no variable '" + name + "'");
}

Index PODBasis::total_rank() const {
  Index r = 0;
  for (const auto& b : blocks) r += b.rank();
  return r;
}

Layout PODBasis::reduced_layout() const {
  std::vector<std::string> names;
  std::vector<Index> sizes;
  for (const auto& b : blocks) {
    names.push_back(b.name);
    sizes.push_back(b.rank());
  }
  return Layout::sized(names, sizes);
}

std::vector<Index> leading_modes(Index r) {
  std::vector<Index> m(static_cast<std::size_t>(std::max<Index>(r, 0)));
  std::iota(m.begin(), m.end(), Index{0});
  return m;
}

Vector snapshot_singular_values(const Matrix& block) { return thin_svd(block).sigma; }

PODBasis compute_pod_basis(const SnapshotSet& s, const std::map<std::string, Index>& ranks) {
  std::map<std::string, std::vector<Index>> modes;
  for (const auto& [name, r] : ranks) modes[name] = leading_modes(r);
  return compute_pod_basis(s, modes);
}

PODBasis compute_pod_basis(const SnapshotSet& s,
                           const std::map<std::string, std::vector<Index>>& modes) {
  for (const auto& [name, _] : modes) {
    if (!s.layout.contains(name)) {
      throw DimensionError("compute_pod_basis: no snapshots for variable '" + name + "'");
    }
  }
  PODBasis out;
  const auto& layout_blocks = s.layout.blocks();
  for (std::size_t i = 0; i < layout_blocks.size(); ++i) {
    const std::string& name = layout_blocks[i].name;
    const auto it = modes.find(name);
    if (it == modes.end()) {
      throw DimensionError("compute_pod_basis: no rank given for variable '" + name + "'");
    }
    const Matrix& x = s.blocks[i];
    const SVDResult svd = thin_svd(x);
    PODBlock b;
    b.name = name;
    b.sigma = svd.sigma;
    b.modes = it->second;
    b.numerical_rank = numerical_rank(svd.sigma, x.rows(), x.cols());
    std::set<Index> seen;
    for (Index m : b.modes) {
      if (m < 0 || !seen.insert(m).second) {
        throw DimensionError("compute_pod_basis: invalid or repeated mode " + std::to_string(m) +
                             " for variable '" + name + "'");
      }
      if (m >= b.numerical_rank) {
        throw RankError("compute_pod_basis: variable '" + name + "' requests mode " +
                            std::to_string(m + 1) + " but its snapshots have numerical rank " +
                            std::to_string(b.numerical_rank),
                        b.numerical_rank);
      }
    }
    b.basis.resize(x.rows(), static_cast<Index>(b.modes.size()));
    for (std::size_t j = 0; j < b.modes.size(); ++j) {
      b.basis.col(static_cast<Index>(j)) = svd.U.col(b.modes[j]);
    }
    out.blocks.push_back(std::move(b));
  }
  return out;
}

PODBasis compute_full_pod(const SnapshotSet& s) {
  PODBasis out;
  const auto& layout_blocks = s.layout.blocks();
  for (std::size_t i = 0; i < layout_blocks.size(); ++i) {
    const Matrix& x = s.blocks[i];
    const SVDResult svd = thin_svd(x);
    PODBlock b;
    b.name = layout_blocks[i].name;
    b.sigma = svd.sigma;
    b.numerical_rank = numerical_rank(svd.sigma, x.rows(), x.cols());
    b.modes = leading_modes(b.numerical_rank);
    b.basis = svd.U.leftCols(b.numerical_rank);
    out.blocks.push_back(std::move(b));
  }
  return out;
}

PODBasis truncate_pod(const PODBasis& full, const std::map<std::string, std::vector<Index>>& modes) {
  for (const auto& [name, _] : modes) full.block(name);
  PODBasis out;
  for (const auto& fb : full.blocks) {
    const auto it = modes.find(fb.name);
    if (it == modes.end()) continue;
    PODBlock b;
    b.name = fb.name;
    b.sigma = fb.sigma;
    b.numerical_rank = fb.numerical_rank;
    b.modes = it->second;
    b.basis.resize(fb.basis.rows(), static_cast<Index>(b.modes.size()));
    for (std::size_t j = 0; j < b.modes.size(); ++j) {
      const Index m = b.modes[j];
      if (m < 0 || m >= fb.rank()) {
        throw RankError("truncate_pod: variable '" + fb.name + "' requests mode " +
                            std::to_string(m + 1) + " but its snapshots have numerical rank " +
                            std::to_string(fb.numerical_rank),
                        fb.numerical_rank);
      }
      b.basis.col(static_cast<Index>(j)) = fb.basis.col(m);
    }
    out.blocks.push_back(std::move(b));
  }
  return out;
}

PODBasis truncate_pod(const PODBasis& full, const std::map<std::string, Index>& ranks) {
  std::map<std::string, std::vector<Index>> modes;
  for (const auto& [name, r] : ranks) modes[name] = leading_modes(r);
  return truncate_pod(full, modes);
}

}  // namespace liftrom
