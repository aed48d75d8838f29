#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace liftrom::cli {

struct CheckResult {
  std::string name;
  double value = 0.0;      ///< worst measured defect
  double tolerance = 0.0;  ///< pass when value <= tolerance
  bool pass = false;
  std::string detail;
};

/// Always-on property checks on small model instances:
///   POD orthonormality, algebraic-constraint residuals, DEIM interpolation
///   exactness, dense-Kronecker equivalence of every tensor product with
///   dimension product <= 1e4, and byte-identical CLI artifacts on rerun.
/// Random states come from `seed`; artifacts are written below `scratch`.
std::vector<CheckResult> run_invariant_suite(std::uint64_t seed, const std::filesystem::path& scratch);

}  // namespace liftrom::cli
