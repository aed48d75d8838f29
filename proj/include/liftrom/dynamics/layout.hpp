#pragma once

#include "liftrom/types.hpp"

#include <string>
#include <vector>

namespace liftrom {

/// Named contiguous block of a state vector.
struct VariableBlock {
  std::string name;
  Index offset = 0;
  Index size = 0;
};

/// Ordered, contiguous partition of a state vector into named variables.
class Layout {
 public:
  Layout() = default;
  explicit Layout(std::vector<VariableBlock> blocks);

  /// Consecutive blocks of equal size.
  static Layout uniform(const std::vector<std::string>& names, Index block_size);
  /// Consecutive blocks with the given sizes.
  static Layout sized(const std::vector<std::string>& names, const std::vector<Index>& sizes);

  const std::vector<VariableBlock>& blocks() const { return blocks_; }
  Index total() const;
  bool empty() const { return blocks_.empty(); }
  bool contains(const std::string& name) const;
  const VariableBlock& block(const std::string& name) const;
  std::vector<std::string> names() const;

  friend bool operator==(const Layout&, const Layout&) = default;

 private:
  std::vector<VariableBlock> blocks_;
};

bool operator==(const VariableBlock& a, const VariableBlock& b);

}  // namespace liftrom
