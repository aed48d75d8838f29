#include "liftrom/dynamics/layout.hpp"

#include "liftrom/errors.hpp"

#include <algorithm>

namespace liftrom {

bool operator==(const VariableBlock& a, const VariableBlock& b) {
  return a.name == b.name && a.offset == b.offset && a.size == b.size;
}

Layout::Layout(std::vector<VariableBlock> blocks) : blocks_(std::move(blocks)) {
  Index expect = 0;
  for (const auto& b : blocks_) {
    if (b.offset != expect || b.size < 0) {
      throw DimensionError("Layout: block '" + b.name + "' is not contiguous");
    }
    if (std::count_if(blocks_.begin(), blocks_.end(),
                      [&](const VariableBlock& o) { return o.name == b.name; }) > 1) {
      throw DimensionError("Layout: duplicate block name '" + b.name + "'");
    }
    expect += b.size;
  }
}

Layout Layout::uniform(const std::vector<std::string>& names, Index block_size) {
  return sized(names, std::vector<Index>(names.size(), block_size));
}

Layout Layout::sized(const std::vector<std::string>& names, const std::vector<Index>& sizes) {
  if (names.size() != sizes.size()) throw DimensionError("Layout::sized: names/sizes mismatch");
  std::vector<VariableBlock> blocks;
  Index offset = 0;
  for (std::size_t i = 0; i < names.size(); ++i) {
    blocks.push_back({names[i], offset, sizes[i]});
    offset += sizes[i];
  }
  return Layout(std::move(blocks));
}

Index Layout::total() const {
  return blocks_.empty() ? 0 : blocks_.back().offset + blocks_.back().size;
}

bool Layout::contains(const std::string& name) const {
  return std::any_of(blocks_.begin(), blocks_.end(),
                     [&](const VariableBlock& b) { return b.name == name; });
}

const VariableBlock& Layout::block(const std::string& name) const {
  for (const auto& b : blocks_) {
    if (b.name == name) return b;
  }
  throw DimensionError("Layout: unknown variable '" + name + "'");
}

std::vector<std::string> Layout::names() const {
  std::vector<std::string> out;
  for (const auto& b : blocks_) out.push_back(b.name);
  return out;
}

}  // namespace liftrom
