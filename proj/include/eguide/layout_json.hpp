#pragma once

#include <json.hpp>

#include "eguide/geometry.hpp"

namespace eguide {

/// Schema version written into every serialized layout.
inline constexpr int kLayoutSchemaVersion = 1;

/// Serializes a layout (metres). Infinite strip edges are written as null.
nlohmann::json layout_to_json(const ElectrodeLayout& layout);

/// Throws GeometryError on schema or geometry violations.
ElectrodeLayout layout_from_json(const nlohmann::json& doc);

} // namespace eguide
