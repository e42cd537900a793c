#pragma once

// Structured-text (JSON) form of a Domain:
//
//   {"loops": [[piece, ...], ...]}      or      {"pieces": [piece, ...]}
//
//   piece = {"kind": "arc", "center": [x, y], "radius": r,
//            "angle_start": a0, "angle_end": a1, "orientation": "ccw"|"cw",
//            "exterior_curvature": k, "data_tag": "A"}
//         | {"kind": "segment", "start": [x, y], "end": [x, y],
//            "exterior_curvature": 0, "data_tag": "B"}
//
// Angles in radians. `exterior_curvature` is optional on input; when given it
// must agree with the geometry.

#include <nlohmann/json.hpp>

#include "cmclab/geometry.hpp"

namespace cmclab {

nlohmann::ordered_json domain_to_json(const Domain& dom);
Domain domain_from_json(const nlohmann::ordered_json& j);

nlohmann::ordered_json arc_to_json(const CircleArc& arc);
CircleArc arc_from_json(const nlohmann::ordered_json& j);

}  // namespace cmclab
