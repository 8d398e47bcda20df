#include <algorithm>
#include <cmath>

#include "mosco/classlab/graph.hpp"

namespace mosco::classlab {

using geom::cross;
using geom::dist;
using geom::dot;
using geom::norm;

namespace {

constexpr double kPi = M_PI;

double mod_pi(double a) {
  a = std::fmod(a, kPi);
  if (a < 0) a += kPi;
  if (a >= kPi) a -= kPi;
  return a;
}

struct Interval {
  double lo, width;  // lo in [0, pi)
};

// Convex hull (monotone chain) of up to 4 points; collinear points dropped.
std::vector<Point> hull(std::vector<Point> p) {
  std::sort(p.begin(), p.end(), [](Point a, Point b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  p.erase(std::unique(p.begin(), p.end(), [](Point a, Point b) { return dist(a, b) <= 1e-15; }), p.end());
  if (p.size() < 3) return p;
  std::vector<Point> h(2 * p.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    while (k >= 2 && cross(h[k - 1] - h[k - 2], p[i] - h[k - 2]) <= 0) --k;
    h[k++] = p[i];
  }
  for (std::size_t i = p.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(h[k - 1] - h[k - 2], p[i] - h[k - 2]) <= 0) --k;
    h[k++] = p[i];
  }
  h.resize(k - 1);
  return h;
}

// Oriented angular interval spanned by a convex set V not containing 0.
// Returns (lo, width) with width < pi.
Interval oriented_arc(const std::vector<Point>& V) {
  Point ref{0, 0};
  for (const Point& v : V) ref = ref + (1.0 / norm(v)) * v;
  const double r = std::atan2(ref.y, ref.x);
  double mn = 0, mx = 0;
  bool first = true;
  for (const Point& v : V) {
    double d = std::atan2(v.y, v.x) - r;
    while (d <= -kPi) d += 2 * kPi;
    while (d > kPi) d -= 2 * kPi;
    if (first) {
      mn = mx = d;
      first = false;
    } else {
      mn = std::min(mn, d);
      mx = std::max(mx, d);
    }
  }
  return {r + mn, mx - mn};
}

// Chord directions between two segments (Minkowski difference t - s).
// Returns false if every direction occurs.
bool pair_directions(const Segment& s, const Segment& t, std::vector<Interval>& out) {
  // Rounding noise scales with the coordinates, not with the segment lengths.
  const double scale = std::max({norm(s.b - s.a), norm(t.b - t.a), norm(t.a - s.a), std::abs(s.a.x), std::abs(s.a.y),
                                 std::abs(t.a.x), std::abs(t.a.y), 1e-300});
  const double eps = 1e-12 * scale;
  std::vector<Point> raw = {t.a - s.a, t.a - s.b, t.b - s.a, t.b - s.b};
  std::vector<Point> H = hull(raw);
  if (H.size() >= 3) {
    // Collapse hulls thinner than eps (collinear pieces up to rounding).
    std::size_t bi = 0, bj = 1;
    for (std::size_t i = 0; i < H.size(); ++i)
      for (std::size_t j = i + 1; j < H.size(); ++j)
        if (dist(H[i], H[j]) > dist(H[bi], H[bj])) {
          bi = i;
          bj = j;
        }
    const Point d = H[bj] - H[bi];
    double width = 0.0;
    for (const Point& q : H) width = std::max(width, std::abs(cross(d, q - H[bi])) / norm(d));
    if (width <= eps) H = {H[bi], H[bj]};
  }
  auto emit = [&](Interval iv) { out.push_back({mod_pi(iv.lo), iv.width}); };
  if (H.size() == 1) {
    if (norm(H[0]) > eps) emit({std::atan2(H[0].y, H[0].x), 0.0});
    return true;
  }
  if (H.size() == 2) {
    const Point u = H[0], v = H[1];
    const double d = geom::point_segment_distance({0, 0}, {u, v});
    if (d <= eps) {
      // 0 on the segment: only the segment's own direction (and endpoints' if 0 is an end)
      emit({std::atan2(v.y - u.y, v.x - u.x), 0.0});
      return true;
    }
    emit(oriented_arc({u, v}));
    return true;
  }
  // Polygon: locate 0.
  const std::size_t n = H.size();
  bool inside = true;
  int on_edge = -1;
  for (std::size_t i = 0; i < n; ++i) {
    const Point a = H[i], b = H[(i + 1) % n];
    const double c = cross(b - a, Point{0, 0} - a);
    if (c < -eps * norm(b - a)) inside = false;
    if (std::abs(c) <= eps * norm(b - a) && geom::point_segment_distance({0, 0}, {a, b}) <= eps) on_edge = static_cast<int>(i);
  }
  if (!inside) {
    emit(oriented_arc(H));
    return true;
  }
  if (on_edge < 0) return false;  // strictly inside
  // 0 on the boundary: at a vertex the directions form a cone, on an edge a half plane.
  for (std::size_t i = 0; i < n; ++i) {
    if (norm(H[i]) <= eps) {
      const Point prev = H[(i + n - 1) % n], next = H[(i + 1) % n];
      emit(oriented_arc({prev - H[i], next - H[i]}));
      return true;
    }
  }
  return false;
}

}  // namespace

DirectionSpan chord_span(const std::vector<Segment>& segs) {
  std::vector<Interval> iv;
  DirectionSpan out;
  for (std::size_t i = 0; i < segs.size(); ++i)
    for (std::size_t j = i; j < segs.size(); ++j) {
      if (!pair_directions(segs[i], segs[j], iv)) {
        out.full = true;
        out.empty = false;
        out.half = kPi / 2;
        return out;
      }
    }
  if (iv.empty()) return out;
  out.empty = false;
  // Union on the circle of length pi; the complement's largest gap gives the span.
  std::vector<std::pair<double, double>> ev;
  for (const Interval& x : iv) {
    if (x.width >= kPi) {
      out.full = true;
      out.half = kPi / 2;
      return out;
    }
    const double hi = x.lo + x.width;
    if (hi < kPi) {
      ev.push_back({x.lo, hi});
    } else {
      ev.push_back({x.lo, kPi});
      ev.push_back({0.0, hi - kPi});
    }
  }
  std::sort(ev.begin(), ev.end());
  std::vector<std::pair<double, double>> merged;
  for (const auto& e : ev) {
    if (!merged.empty() && e.first <= merged.back().second)
      merged.back().second = std::max(merged.back().second, e.second);
    else
      merged.push_back(e);
  }
  // Gaps between consecutive merged intervals, including the wrap-around one.
  double best_gap = -1, gap_end = 0;
  for (std::size_t k = 0; k < merged.size(); ++k) {
    const double a = merged[k].second;
    const double b = (k + 1 < merged.size()) ? merged[k + 1].first : merged[0].first + kPi;
    if (b - a > best_gap) {
      best_gap = b - a;
      gap_end = b;
    }
  }
  if (best_gap <= 0) {
    out.full = true;
    out.half = kPi / 2;
    return out;
  }
  const double span = std::max(0.0, kPi - best_gap);
  out.half = 0.5 * span;
  out.center = mod_pi(gap_end + out.half);
  return out;
}

bool oriented_span(Point e, const std::vector<Segment>& segs, double& lo, double& hi) {
  std::vector<Point> pts;
  for (const Segment& s : segs) {
    const Point a = s.a - e, b = s.b - e;
    const double scale = std::max({norm(a), norm(b), 1e-300});
    if (geom::point_segment_distance({0, 0}, {a, b}) <= 1e-12 * scale) {
      // Segment through e: fine only if e is one of its endpoints.
      if (norm(a) > 1e-12 * scale && norm(b) > 1e-12 * scale) return false;
      const Point other = norm(a) > norm(b) ? a : b;
      if (norm(other) > 0) pts.push_back(other);
      continue;
    }
    pts.push_back(a);
    pts.push_back(b);
  }
  if (pts.empty()) {
    lo = hi = 0;
    return true;
  }
  // A segment not through the origin subtends < pi, so the vertex directions bound everything.
  const Interval iv = oriented_arc(pts);
  if (iv.width >= kPi) return false;
  lo = iv.lo;
  hi = iv.lo + iv.width;
  return true;
}

std::vector<std::vector<Point>> clip_polyline(const std::vector<Point>& pts, Point c, double rho) {
  std::vector<std::vector<Point>> runs;
  if (pts.size() == 1) {
    if (dist(pts[0], c) <= rho) runs.push_back(pts);
    return runs;
  }
  std::vector<Point> cur;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    double t0, t1;
    const Segment s{pts[i], pts[i + 1]};
    if (!geom::clip_to_disk(s, c, rho, t0, t1)) {
      if (!cur.empty()) runs.push_back(std::move(cur));
      cur.clear();
      continue;
    }
    const Point p0 = s.at(t0), p1 = s.at(t1);
    if (t0 > 0 && !cur.empty()) {
      runs.push_back(std::move(cur));
      cur.clear();
    }
    if (cur.empty()) cur.push_back(p0);
    cur.push_back(p1);
    if (t1 < 1) {
      runs.push_back(std::move(cur));
      cur.clear();
    }
  }
  if (!cur.empty()) runs.push_back(std::move(cur));
  return runs;
}

int branch_count(Point p, const std::vector<Segment>& segs) {
  std::vector<double> dirs;
  for (const Segment& s : segs) {
    const double len = s.length();
    if (len == 0) continue;
    if (geom::point_segment_distance(p, s) > 1e-12 * std::max(1.0, len)) continue;
    const double da = dist(p, s.a), db = dist(p, s.b);
    if (da > 1e-12) dirs.push_back(std::atan2(s.a.y - p.y, s.a.x - p.x));
    if (db > 1e-12) dirs.push_back(std::atan2(s.b.y - p.y, s.b.x - p.x));
  }
  std::sort(dirs.begin(), dirs.end());
  int n = 0;
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    bool dup = false;
    for (std::size_t j = 0; j < i && !dup; ++j) {
      double d = std::abs(dirs[i] - dirs[j]);
      d = std::min(d, 2 * kPi - d);
      dup = d <= 1e-9;
    }
    if (!dup) ++n;
  }
  return n;
}

std::vector<Sample> sample_polyline(const std::vector<Point>& pts, double h) {
  std::vector<Sample> out;
  if (pts.size() == 1) {
    out.push_back({pts[0], 0.0, 0});
    return out;
  }
  double s0 = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double len = dist(pts[i], pts[i + 1]);
    const int n = std::max(1, static_cast<int>(std::ceil(len / h)));
    for (int k = 0; k < n; ++k) out.push_back({geom::lerp(pts[i], pts[i + 1], static_cast<double>(k) / n), s0 + len * k / n, i});
    s0 += len;
  }
  out.push_back({pts.back(), s0, pts.size() - 2});
  return out;
}

}  // namespace mosco::classlab
