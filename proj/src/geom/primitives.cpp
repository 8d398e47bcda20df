#include "mosco/geom/primitives.hpp"

#include <algorithm>

namespace mosco::geom {

double closest_param(Point p, const Segment& s) {
  const Point d = s.b - s.a;
  const double l2 = dot(d, d);
  if (l2 == 0.0) return 0.0;
  return std::clamp(dot(p - s.a, d) / l2, 0.0, 1.0);
}

double point_segment_distance(Point p, const Segment& s) { return dist(p, s.at(closest_param(p, s))); }

double segment_segment_distance(const Segment& s, const Segment& t) {
  if (segments_intersect(s, t)) return 0.0;
  return std::min({point_segment_distance(s.a, t), point_segment_distance(s.b, t),
                   point_segment_distance(t.a, s), point_segment_distance(t.b, s)});
}

namespace {

int orient(Point a, Point b, Point c) {
  const Point u = b - a, v = c - a;
  const double cr = cross(u, v);
  const double scale = std::max({norm(u) * norm(v), kEps});
  if (std::abs(cr) <= kEps * scale) return 0;
  return cr > 0 ? 1 : -1;
}

bool on_segment(Point p, const Segment& s) { return point_segment_distance(p, s) <= kEps * std::max(1.0, s.length()); }

}  // namespace

bool segments_intersect(const Segment& s, const Segment& t) {
  const int o1 = orient(s.a, s.b, t.a), o2 = orient(s.a, s.b, t.b);
  const int o3 = orient(t.a, t.b, s.a), o4 = orient(t.a, t.b, s.b);
  if (o1 * o2 < 0 && o3 * o4 < 0) return true;
  return on_segment(t.a, s) || on_segment(t.b, s) || on_segment(s.a, t) || on_segment(s.b, t);
}

std::vector<Point> segment_intersections(const Segment& s, const Segment& t) {
  std::vector<Point> out;
  if (!segments_intersect(s, t)) return out;
  const Point d1 = s.b - s.a, d2 = t.b - t.a;
  const double den = cross(d1, d2);
  const double scale = std::max(norm(d1) * norm(d2), kEps);
  if (std::abs(den) > kEps * scale) {
    const double u = std::clamp(cross(t.a - s.a, d2) / den, 0.0, 1.0);
    out.push_back(s.at(u));
    return out;
  }
  // Collinear (or degenerate): report endpoints lying on the other segment.
  auto add = [&](Point p) {
    for (const Point& q : out)
      if (dist(p, q) <= kEps) return;
    out.push_back(p);
  };
  if (on_segment(t.a, s)) add(t.a);
  if (on_segment(t.b, s)) add(t.b);
  if (on_segment(s.a, t)) add(s.a);
  if (on_segment(s.b, t)) add(s.b);
  return out;
}

bool clip_to_disk(const Segment& s, Point c, double r, double& t0, double& t1) {
  const Point d = s.b - s.a, f = s.a - c;
  const double A = dot(d, d);
  if (A == 0.0) {
    if (dot(f, f) <= r * r) {
      t0 = t1 = 0.0;
      return true;
    }
    return false;
  }
  const double B = 2.0 * dot(f, d), C = dot(f, f) - r * r;
  const double disc = B * B - 4 * A * C;
  if (disc < 0) return false;
  const double sq = std::sqrt(disc);
  double u0 = (-B - sq) / (2 * A), u1 = (-B + sq) / (2 * A);
  t0 = std::max(0.0, u0);
  t1 = std::min(1.0, u1);
  return t0 <= t1;
}

double signed_area(const std::vector<Point>& poly) {
  double a = 0.0;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) a += cross(poly[i], poly[(i + 1) % n]);
  return 0.5 * a;
}

double perimeter(const std::vector<Point>& poly, bool closed) {
  double l = 0.0;
  const std::size_t n = poly.size();
  if (n < 2) return 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) l += dist(poly[i], poly[i + 1]);
  if (closed) l += dist(poly[n - 1], poly[0]);
  return l;
}

bool point_in_polygon(Point p, const std::vector<Point>& poly) {
  const std::size_t n = poly.size();
  bool inside = false;
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Point a = poly[j], b = poly[i];
    if (point_segment_distance(p, {a, b}) <= kEps) return true;
    if ((a.y > p.y) != (b.y > p.y)) {
      const double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (p.x < x) inside = !inside;
    }
  }
  return inside;
}

}  // namespace mosco::geom
