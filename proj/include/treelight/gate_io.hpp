#pragma once

#include <filesystem>

#include <json.hpp>

#include "treelight/gate_algebra.hpp"
#include "treelight/tree_geometry.hpp"

namespace treelight {

inline constexpr const char* kGateLayout = "row-major outputs x inputs, site-1 most significant";

// Gate file: {q, z, layout, entries: [[re, im], ...], metadata: {...}}.
nlohmann::json gate_to_json(const Gate& u, const nlohmann::json& metadata = nlohmann::json::object());
Gate gate_from_json(const nlohmann::json& j);

// Tree and coloring as {z, depth, rooted, vertices: [{id, parent, color, hub_color}]}.
nlohmann::json tree_to_json(const TwoColoring& c);
TwoColoring tree_from_json(const nlohmann::json& j);

// Writes through a temporary file and renames it into place.
void write_atomic(const std::filesystem::path& path, const std::string& contents);
std::string read_file(const std::filesystem::path& path);

}  // namespace treelight
