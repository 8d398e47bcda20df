#include "mosco/geom/scene.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mosco/core/error.hpp"

namespace mosco::geom {

double Polyline::length() const {
  double l = 0.0;
  for (std::size_t i = 0; i < segment_count(); ++i) l += segment(i).length();
  return l;
}

bool operator==(const Polyline& a, const Polyline& b) { return a.pts == b.pts; }

bool CompactScene::in_box(Point p, double slack) const {
  const double tol = slack * std::max(1.0, box_radius);
  return std::abs(p.x - box_center.x) <= box_radius + tol && std::abs(p.y - box_center.y) <= box_radius + tol;
}

std::vector<Segment> CompactScene::crack_segments() const {
  std::vector<Segment> out;
  for (const auto& pl : cracks) {
    if (pl.is_point()) out.push_back({pl.pts[0], pl.pts[0]});
    for (std::size_t i = 0; i < pl.segment_count(); ++i) out.push_back(pl.segment(i));
  }
  return out;
}

std::vector<Segment> CompactScene::all_segments() const {
  auto out = crack_segments();
  for (const auto& poly : solids)
    for (std::size_t i = 0; i < poly.size(); ++i) out.push_back({poly[i], poly[(i + 1) % poly.size()]});
  return out;
}

std::vector<Point> CompactScene::vertices() const {
  std::vector<Point> v;
  for (const auto& pl : cracks) v.insert(v.end(), pl.pts.begin(), pl.pts.end());
  for (const auto& poly : solids) v.insert(v.end(), poly.begin(), poly.end());
  return v;
}

namespace {

std::string where(const std::string& what, std::size_t idx) {
  std::ostringstream os;
  os << what << " #" << idx;
  return os.str();
}

bool finite(Point p) { return std::isfinite(p.x) && std::isfinite(p.y); }

// Non-adjacent segments must not touch; adjacent ones must not fold back.
void check_simple(const std::vector<Segment>& segs, bool closed, const std::string& name) {
  const std::size_t n = segs.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool adjacent = (j == i + 1) || (closed && i == 0 && j == n - 1);
      if (!adjacent) {
        if (segments_intersect(segs[i], segs[j])) fail(ErrorCode::MalformedSpec, name + " crosses itself");
        continue;
      }
      // Shared vertex: reject collinear fold-back (overlap beyond the joint).
      const Segment& s = segs[i];
      const Segment& t = segs[j];
      Point joint, u, v;
      if (j == i + 1) {
        joint = s.b;
        u = s.a - joint;
        v = t.b - joint;
      } else {
        joint = s.a;
        u = s.b - joint;
        v = t.a - joint;
      }
      const double c = cross(u, v), d = dot(u, v);
      if (std::abs(c) <= kEps * norm(u) * norm(v) && d > 0)
        fail(ErrorCode::MalformedSpec, name + " folds back on itself");
    }
  }
}

}  // namespace

CompactScene build_compact_set(const SceneSpec& spec) {
  if (!(spec.box_radius > 0) || !std::isfinite(spec.box_radius)) fail(ErrorCode::MalformedSpec, "box_radius must be positive");
  if (!finite(spec.box_center)) fail(ErrorCode::MalformedSpec, "box center not finite");
  CompactScene s;
  s.box_radius = spec.box_radius;
  s.box_center = spec.box_center;
  s.label = spec.label;

  for (std::size_t k = 0; k < spec.cracks.size(); ++k) {
    const auto& raw = spec.cracks[k];
    const std::string name = where("crack", k);
    if (raw.empty()) fail(ErrorCode::MalformedSpec, name + " has no vertices");
    Polyline pl{raw};
    for (const Point& p : pl.pts) {
      if (!finite(p)) fail(ErrorCode::MalformedSpec, name + " has a non-finite vertex");
      if (!s.in_box(p)) fail(ErrorCode::OutOfBox, name + " leaves the box");
    }
    // Snap a nearly-closed loop shut.
    if (pl.pts.size() >= 4 && dist(pl.pts.front(), pl.pts.back()) <= kEps) pl.pts.back() = pl.pts.front();
    std::vector<Segment> segs;
    for (std::size_t i = 0; i < pl.segment_count(); ++i) {
      if (pl.segment(i).length() <= kEps) fail(ErrorCode::DegenerateSegment, name);
      segs.push_back(pl.segment(i));
    }
    check_simple(segs, pl.closed(), name);
    s.cracks.push_back(std::move(pl));
  }

  for (std::size_t k = 0; k < spec.solids.size(); ++k) {
    auto poly = spec.solids[k];
    const std::string name = where("solid", k);
    if (poly.size() >= 2 && poly.front() == poly.back()) poly.pop_back();
    if (poly.size() < 3) fail(ErrorCode::MalformedSpec, name + " needs at least 3 vertices");
    for (const Point& p : poly) {
      if (!finite(p)) fail(ErrorCode::MalformedSpec, name + " has a non-finite vertex");
      if (!s.in_box(p)) fail(ErrorCode::OutOfBox, name + " leaves the box");
    }
    std::vector<Segment> segs;
    for (std::size_t i = 0; i < poly.size(); ++i) {
      Segment e{poly[i], poly[(i + 1) % poly.size()]};
      if (e.length() <= kEps) fail(ErrorCode::DegenerateSegment, name);
      segs.push_back(e);
    }
    check_simple(segs, true, name);
    if (signed_area(poly) < 0) std::reverse(poly.begin(), poly.end());
    s.solids.push_back(std::move(poly));
  }
  return s;
}

CompactScene crack_subscene(const CompactScene& s, const std::vector<std::size_t>& crack_ids) {
  CompactScene out;
  out.box_radius = s.box_radius;
  out.box_center = s.box_center;
  out.label = s.label;
  for (std::size_t id : crack_ids) out.cracks.push_back(s.cracks.at(id));
  return out;
}

CompactScene with_box_boundary(const CompactScene& s, Point c, double r) {
  CompactScene out = s;
  out.box_center = c;
  out.box_radius = std::max(r, s.box_radius + std::max(std::abs(s.box_center.x - c.x), std::abs(s.box_center.y - c.y)));
  Polyline loop{{{c.x - r, c.y - r}, {c.x + r, c.y - r}, {c.x + r, c.y + r}, {c.x - r, c.y + r}, {c.x - r, c.y - r}}};
  out.cracks.push_back(std::move(loop));
  return out;
}

}  // namespace mosco::geom
