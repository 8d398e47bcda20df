#include "mosco/geom/set_distance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mosco/core/error.hpp"

namespace mosco::geom {

double distance_to_set(Point x, const CompactScene& K) {
  if (K.empty()) fail(ErrorCode::EmptyScene, "distance_to_set");
  for (const auto& poly : K.solids)
    if (point_in_polygon(x, poly)) return 0.0;
  double d = std::numeric_limits<double>::infinity();
  for (const Segment& s : K.all_segments()) d = std::min(d, point_segment_distance(x, s));
  return d;
}

SetDistance::SetDistance(const CompactScene& K) : segs_(K.all_segments()), filled_(K.solids) {
  if (K.empty()) fail(ErrorCode::EmptyScene, "SetDistance");
  build();
}

SetDistance::SetDistance(std::vector<Segment> segs, std::vector<std::vector<Point>> filled)
    : segs_(std::move(segs)), filled_(std::move(filled)) {
  for (const auto& poly : filled_)
    for (std::size_t i = 0; i < poly.size(); ++i) segs_.push_back({poly[i], poly[(i + 1) % poly.size()]});
  if (segs_.empty()) fail(ErrorCode::EmptyScene, "SetDistance");
  build();
}

void SetDistance::build() {
  lo_ = {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  hi_ = {-lo_.x, -lo_.y};
  double total = 0.0;
  for (const Segment& s : segs_) {
    lo_.x = std::min({lo_.x, s.a.x, s.b.x});
    lo_.y = std::min({lo_.y, s.a.y, s.b.y});
    hi_.x = std::max({hi_.x, s.a.x, s.b.x});
    hi_.y = std::max({hi_.y, s.a.y, s.b.y});
    total += s.length();
  }
  const double w = std::max(hi_.x - lo_.x, 1e-9), h = std::max(hi_.y - lo_.y, 1e-9);
  // Aim for a few segments per occupied cell and at most ~4 cells per segment.
  const double n = static_cast<double>(segs_.size()) * 4.0 + 64.0;
  cell_ = std::max({total / static_cast<double>(segs_.size()), std::sqrt(w * h / n), std::max(w, h) / n, 1e-9});
  nx_ = std::max(1, static_cast<int>(std::ceil(w / cell_)));
  ny_ = std::max(1, static_cast<int>(std::ceil(h / cell_)));
  std::vector<std::vector<std::int32_t>> buckets(static_cast<std::size_t>(nx_) * ny_);
  auto cx = [&](double x) { return std::clamp(static_cast<int>(std::floor((x - lo_.x) / cell_)), 0, nx_ - 1); };
  auto cy = [&](double y) { return std::clamp(static_cast<int>(std::floor((y - lo_.y) / cell_)), 0, ny_ - 1); };
  for (std::size_t k = 0; k < segs_.size(); ++k) {
    const Segment& s = segs_[k];
    const int i0 = cx(std::min(s.a.x, s.b.x)), i1 = cx(std::max(s.a.x, s.b.x));
    const int j0 = cy(std::min(s.a.y, s.b.y)), j1 = cy(std::max(s.a.y, s.b.y));
    for (int j = j0; j <= j1; ++j)
      for (int i = i0; i <= i1; ++i) {
        const Point c0{lo_.x + i * cell_, lo_.y + j * cell_};
        const Point mid{c0.x + 0.5 * cell_, c0.y + 0.5 * cell_};
        // Keep only cells the segment actually comes near.
        if (point_segment_distance(mid, s) <= cell_ * 0.7072) buckets[static_cast<std::size_t>(j) * nx_ + i].push_back(static_cast<std::int32_t>(k));
      }
  }
  start_.assign(buckets.size() + 1, 0);
  for (std::size_t b = 0; b < buckets.size(); ++b) start_[b + 1] = start_[b] + static_cast<std::int32_t>(buckets[b].size());
  items_.reserve(start_.back());
  for (const auto& b : buckets) items_.insert(items_.end(), b.begin(), b.end());
}

double SetDistance::operator()(Point p) const { return nearest(p, nullptr); }

double SetDistance::nearest(Point p, int* seg_index) const {
  for (const auto& poly : filled_)
    if (point_in_polygon(p, poly)) {
      if (seg_index) *seg_index = -1;
      return 0.0;
    }
  return nearest_segment(p, seg_index);
}

bool SetDistance::covers(const std::vector<Point>& C) const {
  auto strict_cross = [](Point a, Point b, Point c, Point d) {
    const double o1 = cross(b - a, c - a), o2 = cross(b - a, d - a);
    const double o3 = cross(d - c, a - c), o4 = cross(d - c, b - c);
    return ((o1 > 0 && o2 < 0) || (o1 < 0 && o2 > 0)) && ((o3 > 0 && o4 < 0) || (o3 < 0 && o4 > 0));
  };
  const std::size_t m = C.size();
  if (m == 0) return true;
  const std::size_t medges = m == 1 ? 0 : (m == 2 ? 1 : m);
  for (const auto& Q : filled_) {
    bool ok = true;
    for (const Point& q : C) ok = ok && point_in_polygon(q, Q);
    for (std::size_t i = 0; i < Q.size() && ok; ++i) {
      const Point v = Q[i], w = Q[(i + 1) % Q.size()];
      for (std::size_t k = 0; k < medges && ok; ++k)
        if (strict_cross(v, w, C[k], C[(k + 1) % m])) ok = false;
      if (!ok) break;
      // A vertex of Q strictly inside C (or inside an open segment) lets Q's boundary in.
      double db = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < medges; ++k) db = std::min(db, point_segment_distance(v, {C[k], C[(k + 1) % m]}));
      bool on_vertex = false;
      for (const Point& q : C) on_vertex = on_vertex || dist(q, v) <= kEps;
      if (m == 2 && db <= kEps && !on_vertex) ok = false;
      if (m >= 3 && db > kEps && point_in_polygon(v, C)) ok = false;
    }
    if (ok) return true;
  }
  return false;
}

double SetDistance::nearest_segment(Point p, int* seg_index) const {
  const Point q{std::clamp(p.x, lo_.x, hi_.x), std::clamp(p.y, lo_.y, hi_.y)};
  const double d0 = dist(p, q);
  const int ci = std::clamp(static_cast<int>(std::floor((q.x - lo_.x) / cell_)), 0, nx_ - 1);
  const int cj = std::clamp(static_cast<int>(std::floor((q.y - lo_.y) / cell_)), 0, ny_ - 1);
  double best = std::numeric_limits<double>::infinity();
  int best_k = -1;
  const int kmax = std::max(nx_, ny_);
  for (int k = 0; k <= kmax; ++k) {
    const double lb = std::max(d0, (k - 1) * cell_);
    if (lb > best) break;
    const int i0 = ci - k, i1 = ci + k, j0 = cj - k, j1 = cj + k;
    auto visit = [&](int i, int j) {
      if (i < 0 || j < 0 || i >= nx_ || j >= ny_) return;
      const std::size_t b = static_cast<std::size_t>(j) * nx_ + i;
      for (std::int32_t t = start_[b]; t < start_[b + 1]; ++t) {
        const int s = items_[t];
        const double d = point_segment_distance(p, segs_[s]);
        if (d < best || (d == best && s < best_k)) {
          best = d;
          best_k = s;
        }
      }
    };
    if (k == 0) {
      visit(ci, cj);
      continue;
    }
    for (int i = i0; i <= i1; ++i) {
      visit(i, j0);
      visit(i, j1);
    }
    for (int j = j0 + 1; j <= j1 - 1; ++j) {
      visit(i0, j);
      visit(i1, j);
    }
  }
  if (best_k < 0) {
    // Only reachable if buckets were pruned too aggressively; fall back.
    for (std::size_t s = 0; s < segs_.size(); ++s) {
      const double d = point_segment_distance(p, segs_[s]);
      if (d < best) {
        best = d;
        best_k = static_cast<int>(s);
      }
    }
  }
  if (seg_index) *seg_index = best_k;
  return best;
}

}  // namespace mosco::geom
