/**
 * @file detail.hpp
 * @brief Helpers shared by the class-check translation units.
 */
#pragma once

#include <cmath>
#include <vector>

#include "mosco/classlab/graph.hpp"
#include "mosco/classlab/types.hpp"

namespace mosco::classlab::detail {

/// Half-angle of the admissible double cone: tan(alpha)^2 + 1 = L^2.
inline double slope_angle(double L) { return std::atan(std::sqrt(std::max(0.0, L * L - 1.0))); }

/// 1/cos(half): the smallest L whose cone holds a span of this half width.
inline double needed_L(const DirectionSpan& s) {
  if (s.full) return std::numeric_limits<double>::infinity();
  if (s.empty) return 1.0;
  return 1.0 / std::cos(s.half);
}

inline bool span_fits(const DirectionSpan& s, double alpha) { return !s.full && (s.empty || s.half <= alpha + 1e-12); }

/// Parts of the segments inside the closed disk (points kept as zero-length segments).
std::vector<Segment> clip_segments(const std::vector<Segment>& segs, Point c, double rho);

/// Whether K ∩ B(e, r), given as clipped segments, sits on one side of e
/// inside a double cone of half-angle alpha (half-graph at an end point).
bool endpoint_half_graph(Point e, const std::vector<Segment>& in_ball, double alpha);

/// Axis-aligned bounding box overlap with padding.
inline bool boxes_meet(const Segment& s, const Segment& t, double pad) {
  return std::max(s.a.x, s.b.x) + pad >= std::min(t.a.x, t.b.x) && std::max(t.a.x, t.b.x) + pad >= std::min(s.a.x, s.b.x) &&
         std::max(s.a.y, s.b.y) + pad >= std::min(t.a.y, t.b.y) && std::max(t.a.y, t.b.y) + pad >= std::min(s.a.y, s.b.y);
}

/// Drops points within tol of an earlier one.
std::vector<Point> dedupe(const std::vector<Point>& pts, double tol);

double distance_to_points(Point p, const std::vector<Point>& pts);

}  // namespace mosco::classlab::detail
