#pragma once

// Model spec files (YAML). Keys:
//   kind: round_sphere | flat_torus | fubini_study | complex_hyperbolic | product | scaled | conformal
//   name, N, n, c, radius, lambda, amplitude, width, center, children
// See docs/model-spec.md for the full schema.

#include <string>
#include <string_view>

#include "kverify/model.hpp"

namespace kverify {

ModelSpec parse_model_spec(std::string_view text);
ModelSpec load_model_spec(const std::string& path);
std::string model_spec_to_yaml(const ModelSpec& spec);

// Catalog name first, then spec file path.
ModelManifold resolve_model(const std::string& name_or_path);

}  // namespace kverify
