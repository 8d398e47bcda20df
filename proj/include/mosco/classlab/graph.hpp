/**
 * @file graph.hpp
 * @brief Local "rotated Lipschitz graph" tests on sets of segments.
 *
 * Directions are angles modulo pi. A set is a graph over the line with
 * direction theta and slope <= tan(alpha) iff every chord direction lies
 * within alpha of theta; chord_span computes the smallest such alpha exactly.
 */
#pragma once

#include <vector>

#include "mosco/geom/primitives.hpp"

namespace mosco::classlab {

using geom::Point;
using geom::Segment;

struct DirectionSpan {
  bool full = false;     // chords in every direction (not a graph)
  double center = 0.0;   // in [0, pi)
  double half = 0.0;     // half width of the smallest arc holding all chord directions
  bool empty = true;     // no chord at all (single point)
};

/// Exact span of directions of q - p, p and q ranging over the union of segments.
DirectionSpan chord_span(const std::vector<Segment>& segs);

/// Oriented directions (mod 2 pi) of p - e for p on the segments. Returns
/// false if they do not fit in an open half circle; else lo <= hi with hi - lo < pi.
bool oriented_span(Point e, const std::vector<Segment>& segs, double& lo, double& hi);

/// Parts of a polyline inside the closed disk, as maximal connected runs.
std::vector<std::vector<Point>> clip_polyline(const std::vector<Point>& pts, Point c, double rho);

/// Number of distinct directions in which the union of segments leaves p.
int branch_count(Point p, const std::vector<Segment>& segs);

/// Points along a polyline at arclength spacing <= h, with their arclength.
struct Sample {
  Point p;
  double s;
  std::size_t seg;  // segment the sample lies on
};
std::vector<Sample> sample_polyline(const std::vector<Point>& pts, double h);

}  // namespace mosco::classlab
