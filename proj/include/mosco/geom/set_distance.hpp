/**
 * @file set_distance.hpp
 * @brief Exact Euclidean distance to a scene, with a bucket grid for speed.
 */
#pragma once

#include <cstdint>
#include <vector>

#include "mosco/geom/scene.hpp"

namespace mosco::geom {

/// Exact distance to the scene (0 inside solids). Brute force over segments.
double distance_to_set(Point x, const CompactScene& K);

/// Distance oracle over a fixed set of segments and filled polygons.
/// Answers are exact (same formulas as distance_to_set); the bucket grid
/// only prunes candidates.
class SetDistance {
 public:
  explicit SetDistance(const CompactScene& K);
  SetDistance(std::vector<Segment> segs, std::vector<std::vector<Point>> filled);

  double operator()(Point p) const;
  /// Distance and index of a nearest segment (-1 if inside a filled polygon).
  double nearest(Point p, int* seg_index) const;
  /// Distance to the segment set only (filled interiors ignored).
  double nearest_segment(Point p, int* seg_index) const;
  /// Conservative test that a closed polygon (or a segment, given as two
  /// points) lies inside one filled polygon.
  bool covers(const std::vector<Point>& C) const;
  const std::vector<Segment>& segments() const { return segs_; }

 private:
  void build();
  std::vector<Segment> segs_;
  std::vector<std::vector<Point>> filled_;
  Point lo_{}, hi_{};
  double cell_ = 1.0;
  int nx_ = 1, ny_ = 1;
  std::vector<std::int32_t> start_, items_;
};

}  // namespace mosco::geom
