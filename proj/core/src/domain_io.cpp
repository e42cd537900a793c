#include "cmclab/domain_io.hpp"

#include <string>

#include "cmclab/errors.hpp"

namespace cmclab {

namespace {

using json = nlohmann::ordered_json;

json point_json(const Point2& p) { return json::array({p.x, p.y}); }

Point2 point_from(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_array() || j.at(key).size() != 2) {
    throw ConfigError(std::string("domain: '") + key + "' must be an [x, y] pair");
  }
  return {j.at(key).at(0).get<double>(), j.at(key).at(1).get<double>()};
}

double number_from(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number()) {
    throw ConfigError(std::string("domain: '") + key + "' must be a number");
  }
  return j.at(key).get<double>();
}

BoundaryArc piece_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("domain: piece must be an object");
  const std::string kind = j.value("kind", "");
  const std::string tag = j.value("data_tag", "");
  BoundaryArc piece;
  if (kind == "segment") {
    piece = BoundaryArc::segment(point_from(j, "start"), point_from(j, "end"), tag);
  } else if (kind == "arc") {
    piece = BoundaryArc::arc(arc_from_json(j), tag);
  } else {
    throw ConfigError("domain: piece kind must be 'arc' or 'segment'");
  }
  if (j.contains("exterior_curvature")) {
    // Checked against the geometry by the Domain constructor.
    piece.exterior_curvature = number_from(j, "exterior_curvature");
  }
  return piece;
}

}  // namespace

json arc_to_json(const CircleArc& arc) {
  json j;
  j["center"] = point_json(arc.center());
  j["radius"] = arc.radius();
  j["angle_start"] = arc.angle_start();
  j["angle_end"] = arc.angle_end();
  j["orientation"] = arc.orientation() == Orientation::ccw ? "ccw" : "cw";
  return j;
}

CircleArc arc_from_json(const json& j) {
  const std::string o = j.value("orientation", "ccw");
  if (o != "ccw" && o != "cw") throw ConfigError("domain: orientation must be 'ccw' or 'cw'");
  return CircleArc(point_from(j, "center"), number_from(j, "radius"), number_from(j, "angle_start"),
                   number_from(j, "angle_end"), o == "ccw" ? Orientation::ccw : Orientation::cw);
}

json domain_to_json(const Domain& dom) {
  json loops = json::array();
  for (std::size_t k = 0; k < dom.loop_count(); ++k) {
    json loop = json::array();
    for (const auto& piece : dom.loop(k)) {
      json p;
      if (const auto* seg = std::get_if<Segment>(&piece.geometry)) {
        p["kind"] = "segment";
        p["start"] = point_json(seg->start);
        p["end"] = point_json(seg->end);
      } else {
        p["kind"] = "arc";
        const json arc = arc_to_json(std::get<CircleArc>(piece.geometry));
        for (auto& [key, value] : arc.items()) {
          p[key] = value;
        }
      }
      p["exterior_curvature"] = piece.exterior_curvature;
      p["data_tag"] = piece.data_tag;
      loop.push_back(std::move(p));
    }
    loops.push_back(std::move(loop));
  }
  json j;
  j["loops"] = std::move(loops);
  return j;
}

Domain domain_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("domain: expected an object");
  std::vector<std::vector<BoundaryArc>> loops;
  try {
    if (j.contains("loops")) {
      for (const auto& loop : j.at("loops")) {
        std::vector<BoundaryArc> pieces;
        for (const auto& p : loop) pieces.push_back(piece_from_json(p));
        loops.push_back(std::move(pieces));
      }
    } else if (j.contains("pieces")) {
      std::vector<BoundaryArc> pieces;
      for (const auto& p : j.at("pieces")) pieces.push_back(piece_from_json(p));
      loops.push_back(std::move(pieces));
    } else {
      throw ConfigError("domain: expected 'loops' or 'pieces'");
    }
    return Domain(std::move(loops));
  } catch (const ParameterError& e) {
    throw ConfigError(std::string("domain: ") + e.what());
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("domain: ") + e.what());
  }
}

}  // namespace cmclab
