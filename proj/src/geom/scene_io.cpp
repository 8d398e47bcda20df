#include "mosco/geom/scene_io.hpp"

#include "mosco/core/error.hpp"
#include "mosco/core/io.hpp"

namespace mosco::geom {

using nlohmann::json;

json point_to_json(Point p) { return json::array({p.x, p.y}); }

Point point_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    fail(ErrorCode::MalformedSpec, "point must be [x, y]");
  return {j[0].get<double>(), j[1].get<double>()};
}

namespace {

std::vector<std::vector<Point>> read_lists(const json& j, const char* key) {
  std::vector<std::vector<Point>> out;
  if (!j.contains(key)) return out;
  const json& arr = j.at(key);
  if (!arr.is_array()) fail(ErrorCode::MalformedSpec, std::string(key) + " must be an array");
  for (const json& pl : arr) {
    if (!pl.is_array()) fail(ErrorCode::MalformedSpec, std::string(key) + " entries must be vertex arrays");
    std::vector<Point> pts;
    for (const json& p : pl) pts.push_back(point_from_json(p));
    out.push_back(std::move(pts));
  }
  return out;
}

json write_list(const std::vector<Point>& pts) {
  json a = json::array();
  for (const Point& p : pts) a.push_back(point_to_json(p));
  return a;
}

}  // namespace

SceneSpec scene_spec_from_json(const json& j) try {
  if (!j.is_object()) fail(ErrorCode::MalformedSpec, "scene must be an object");
  if (!j.contains("box_radius") || !j["box_radius"].is_number()) fail(ErrorCode::MalformedSpec, "missing box_radius");
  SceneSpec s;
  s.box_radius = j["box_radius"].get<double>();
  if (j.contains("box_center")) s.box_center = point_from_json(j["box_center"]);
  s.cracks = read_lists(j, "cracks");
  s.solids = read_lists(j, "solids");
  if (j.contains("label")) s.label = j["label"].get<std::string>();
  return s;
} catch (const json::exception& e) {
  fail(ErrorCode::MalformedSpec, e.what());
}

CompactScene scene_from_json(const json& j) { return build_compact_set(scene_spec_from_json(j)); }

json scene_to_json(const CompactScene& s) {
  json j;
  j["box_radius"] = s.box_radius;
  j["box_center"] = point_to_json(s.box_center);
  j["cracks"] = json::array();
  for (const auto& pl : s.cracks) j["cracks"].push_back(write_list(pl.pts));
  j["solids"] = json::array();
  for (const auto& P : s.solids) j["solids"].push_back(write_list(P));
  j["label"] = s.label;
  return j;
}

CompactScene load_scene(const std::string& path) {
  json j;
  try {
    j = json::parse(read_text_file(path));
  } catch (const json::exception& e) {
    fail(ErrorCode::MalformedSpec, path + ": " + e.what());
  }
  return scene_from_json(j);
}

void save_scene(const std::string& path, const CompactScene& s) { write_file_atomic(path, scene_to_json(s).dump(2) + "\n"); }

}  // namespace mosco::geom
