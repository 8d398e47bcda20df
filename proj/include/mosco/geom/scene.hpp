/**
 * @file scene.hpp
 * @brief Compact planar sets made of crack polylines and solid polygons.
 */
#pragma once

#include <string>
#include <vector>

#include "mosco/geom/primitives.hpp"

namespace mosco::geom {

/// A polyline with at least one vertex. One vertex = isolated point;
/// first vertex equal to last (and >= 4 entries) = closed loop.
struct Polyline {
  std::vector<Point> pts;
  bool is_point() const { return pts.size() == 1; }
  bool closed() const { return pts.size() >= 4 && pts.front() == pts.back(); }
  std::size_t segment_count() const { return pts.size() < 2 ? 0 : pts.size() - 1; }
  Segment segment(std::size_t i) const { return {pts[i], pts[i + 1]}; }
  double length() const;
};

/// Raw, unvalidated description (what the JSON reader produces).
struct SceneSpec {
  double box_radius = 1.0;
  Point box_center{};
  std::vector<std::vector<Point>> cracks;
  std::vector<std::vector<Point>> solids;
  std::string label;
};

/// Validated scene. Construct through build_compact_set.
struct CompactScene {
  double box_radius = 1.0;
  Point box_center{};
  std::vector<Polyline> cracks;
  std::vector<std::vector<Point>> solids;  // simple, counter-clockwise, no repeated closing vertex
  std::string label;

  bool empty() const { return cracks.empty() && solids.empty(); }
  Point box_lo() const { return {box_center.x - box_radius, box_center.y - box_radius}; }
  Point box_hi() const { return {box_center.x + box_radius, box_center.y + box_radius}; }
  bool in_box(Point p, double slack = kEps) const;

  /// Crack segments; isolated points appear as zero-length segments.
  std::vector<Segment> crack_segments() const;
  /// Crack segments followed by solid edges.
  std::vector<Segment> all_segments() const;
  std::vector<Point> vertices() const;

  friend bool operator==(const CompactScene&, const CompactScene&) = default;
};

bool operator==(const Polyline& a, const Polyline& b);

CompactScene build_compact_set(const SceneSpec& spec);

/// Scene restricted to a subset of its cracks (solids dropped), same box.
CompactScene crack_subscene(const CompactScene& s, const std::vector<std::size_t>& crack_ids);

/// Scene plus the boundary of a square box (as a closed crack loop) of the given radius.
CompactScene with_box_boundary(const CompactScene& s, Point center, double radius);

}  // namespace mosco::geom
