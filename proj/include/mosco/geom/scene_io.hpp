/**
 * @file scene_io.hpp
 * @brief JSON form of scenes:
 *   {"box_radius": R, "box_center": [x, y], "cracks": [[[x, y], ...], ...],
 *    "solids": [[[x, y], ...], ...], "label": "..."}
 */
#pragma once

#include <json.hpp>
#include <string>

#include "mosco/geom/scene.hpp"

namespace mosco::geom {

nlohmann::json point_to_json(Point p);
Point point_from_json(const nlohmann::json& j);

SceneSpec scene_spec_from_json(const nlohmann::json& j);
CompactScene scene_from_json(const nlohmann::json& j);
nlohmann::json scene_to_json(const CompactScene& s);

CompactScene load_scene(const std::string& path);
void save_scene(const std::string& path, const CompactScene& s);

}  // namespace mosco::geom
