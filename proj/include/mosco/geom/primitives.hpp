/**
 * @file primitives.hpp
 * @brief Points, segments and the small predicates built on them.
 */
#pragma once

#include <cmath>
#include <vector>

namespace mosco::geom {

/// Tolerance for geometric predicates. Points on a boundary count as inside.
inline constexpr double kEps = 1e-12;

struct Point {
  double x = 0.0;
  double y = 0.0;
  friend Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
  friend Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
  friend Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
  friend Point operator*(Point a, double s) { return {s * a.x, s * a.y}; }
  friend bool operator==(Point a, Point b) { return a.x == b.x && a.y == b.y; }
};

inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point a) { return std::hypot(a.x, a.y); }
inline double dist(Point a, Point b) { return norm(a - b); }
inline Point lerp(Point a, Point b, double t) { return {a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)}; }
inline Point rotate(Point a, double th) {
  const double c = std::cos(th), s = std::sin(th);
  return {c * a.x - s * a.y, s * a.x + c * a.y};
}

struct Segment {
  Point a, b;
  double length() const { return dist(a, b); }
  Point at(double t) const { return lerp(a, b, t); }
};

/// Parameter in [0,1] of the point of s closest to p.
double closest_param(Point p, const Segment& s);
double point_segment_distance(Point p, const Segment& s);
double segment_segment_distance(const Segment& s, const Segment& t);

/// Closed segments intersect (touching counts), with tolerance kEps.
bool segments_intersect(const Segment& s, const Segment& t);

/// Intersection points of two segments: 0, 1, or 2 (collinear overlap endpoints).
std::vector<Point> segment_intersections(const Segment& s, const Segment& t);

/// Clip a segment to the closed disk; returns false if the intersection is empty.
bool clip_to_disk(const Segment& s, Point c, double r, double& t0, double& t1);

/// Signed area (positive for counter-clockwise vertex order).
double signed_area(const std::vector<Point>& poly);
double perimeter(const std::vector<Point>& poly, bool closed);

/// Point in polygon (closed: points within kEps of the boundary count as inside).
bool point_in_polygon(Point p, const std::vector<Point>& poly);

}  // namespace mosco::geom
