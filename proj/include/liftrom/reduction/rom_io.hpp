#pragma once

#include "liftrom/dynamics/general_system.hpp"
#include "liftrom/dynamics/polynomial_system.hpp"
#include "liftrom/dynamics/systems.hpp"
#include "liftrom/reduction/deim.hpp"
#include "liftrom/reduction/pod.hpp"
#include "liftrom/reduction/projection.hpp"

#include <memory>
#include <nlohmann/json.hpp>

namespace liftrom {

// JSON forms of reduced models, built on the matrix and tensor schemas:
//   layout        [{"name": s, "size": k}, ...]
//   polynomial    {"E": sparse | null, "A", "B", "tensors": [tensor],
//                  "bilinear": [{"channel", "op": sparse}],
//                  "input_tensors": [{"channel", "op": tensor}], "layout"}
//   qb blocks     {"n1", "n2", "E11", "A11", "A12", "B1", "H1", "H2", "N11": [...], "N12": [...]}
//   pod-deim      {"E": sparse | null, "A", "B", "M", "sampled_basis", "indices",
//                  "nonlinearity": {"kind", "params"}, "layout"}
//   POD basis     {"variables": [{"name", "modes" (1-based), "numerical_rank", "sigma", "basis"}]}

nlohmann::json layout_to_json(const Layout& l);
Layout layout_from_json(const nlohmann::json& j);

nlohmann::json polynomial_to_json(const PolynomialSystem& s);
PolynomialSystem polynomial_from_json(const nlohmann::json& j);

nlohmann::json qb_blocks_to_json(const QBBlocks& b);
QBBlocks qb_blocks_from_json(const nlohmann::json& j);

nlohmann::json pod_deim_to_json(const PodDeimRom& rom);
PodDeimRom pod_deim_from_json(const nlohmann::json& j);

nlohmann::json pod_basis_to_json(const PODBasis& b);
PODBasis pod_basis_from_json(const nlohmann::json& j);

/// Rebuilds a nonlinearity from its kind() and params().
std::shared_ptr<const ComponentNonlinearity> nonlinearity_from_json(const nlohmann::json& j);

}  // namespace liftrom
