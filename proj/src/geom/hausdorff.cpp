#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "mosco/core/error.hpp"
#include "mosco/geom/measure.hpp"

namespace mosco::geom {

namespace {

struct Item {
  double ub;
  bool cell;       // square cell of a filled polygon, else a sub-segment
  int owner;       // segment index or polygon index
  double t0, t1;   // sub-segment parameters
  Point c;         // cell center
  double w;        // cell half-side
};

struct ByUb {
  bool operator()(const Item& a, const Item& b) const { return a.ub < b.ub; }
};

// d_B <= dist(., sigma) for any segment sigma of B, and that function is
// convex, so its max over a piece is attained at the piece's extreme points.
// Also returns the largest d_B value seen at those points (they lie in A).
double convex_bound(const SetDistance& dB, const std::vector<Point>& pts, double& seen) {
  double best = std::numeric_limits<double>::infinity();
  for (const Point& p : pts) {
    int k = -1;
    seen = std::max(seen, dB(p));
    dB.nearest_segment(p, &k);
    if (k < 0) continue;
    const Segment& s = dB.segments()[k];
    double m = 0.0;
    for (const Point& q : pts) m = std::max(m, point_segment_distance(q, s));
    best = std::min(best, m);
  }
  return best;
}

// Sutherland-Hodgman clip of polygon P by the axis-aligned square.
std::vector<Point> clip_square(const std::vector<Point>& P, Point c, double w) {
  std::vector<Point> cur = P, nxt;
  for (int side = 0; side < 4 && !cur.empty(); ++side) {
    auto val = [&](Point p) {
      switch (side) {
        case 0: return p.x - (c.x - w);
        case 1: return (c.x + w) - p.x;
        case 2: return p.y - (c.y - w);
        default: return (c.y + w) - p.y;
      }
    };
    nxt.clear();
    for (std::size_t i = 0; i < cur.size(); ++i) {
      const Point p = cur[i], q = cur[(i + 1) % cur.size()];
      const double vp = val(p), vq = val(q);
      if (vp >= 0) nxt.push_back(p);
      if ((vp >= 0) != (vq >= 0)) nxt.push_back(lerp(p, q, vp / (vp - vq)));
    }
    cur.swap(nxt);
  }
  return cur;
}

}  // namespace

CertifiedScalar one_sided_hausdorff(const CompactScene& A, const SetDistance& dB, double tol) {
  if (A.empty()) fail(ErrorCode::EmptyScene, "one_sided_hausdorff");
  if (!(tol > 0)) fail(ErrorCode::InvalidArgument, "tol must be positive");
  const std::vector<Segment> segs = A.all_segments();
  std::priority_queue<Item, std::vector<Item>, ByUb> heap;
  double lb = 0.0, pruned = 0.0;

  auto push = [&](Item it) {
    if (it.ub <= lb + tol) {
      pruned = std::max(pruned, it.ub);
      return;
    }
    heap.push(it);
  };
  auto seg_item = [&](int k, double t0, double t1) {
    const Segment& s = segs[k];
    const std::vector<Point> ends = {s.at(t0), s.at(t1)};
    if (dB.covers(ends)) return;  // d_B vanishes on the piece
    const Point m = s.at(0.5 * (t0 + t1));
    const double dm = dB(m);
    lb = std::max(lb, dm);
    const double half = 0.5 * (t1 - t0) * s.length();
    const double ub = std::min(dm + half, convex_bound(dB, ends, lb));
    push({std::max(ub, dm), false, k, t0, t1, {}, 0.0});
  };
  auto cell_item = [&](int poly, Point c, double w) {
    const std::vector<Point> piece = clip_square(A.solids[poly], c, w);
    if (piece.size() < 3) return;  // cell misses the polygon interior
    if (dB.covers(piece)) return;
    const double dc = dB(c);
    if (point_in_polygon(c, A.solids[poly])) lb = std::max(lb, dc);
    const double ub = std::min(dc + w * std::sqrt(2.0), convex_bound(dB, piece, lb));
    push({ub, true, poly, 0, 0, c, w});
  };

  for (std::size_t k = 0; k < segs.size(); ++k) {
    lb = std::max({lb, dB(segs[k].a), dB(segs[k].b)});
  }
  for (std::size_t k = 0; k < segs.size(); ++k) seg_item(static_cast<int>(k), 0.0, 1.0);
  for (std::size_t p = 0; p < A.solids.size(); ++p) {
    const auto& P = A.solids[p];
    Point lo{P[0]}, hi{P[0]};
    for (const Point& q : P) {
      lo = {std::min(lo.x, q.x), std::min(lo.y, q.y)};
      hi = {std::max(hi.x, q.x), std::max(hi.y, q.y)};
    }
    cell_item(static_cast<int>(p), 0.5 * (lo + hi), 0.5 * std::max(hi.x - lo.x, hi.y - lo.y));
  }

  while (!heap.empty()) {
    const Item it = heap.top();
    if (it.ub <= lb + tol) break;
    heap.pop();
    if (it.cell) {
      const double w = 0.5 * it.w;
      for (int dx : {-1, 1})
        for (int dy : {-1, 1}) cell_item(it.owner, {it.c.x + dx * w, it.c.y + dy * w}, w);
    } else {
      const double tm = 0.5 * (it.t0 + it.t1);
      seg_item(it.owner, it.t0, tm);
      seg_item(it.owner, tm, it.t1);
    }
  }
  double ub = std::max(lb, pruned);
  if (!heap.empty()) ub = std::max(ub, heap.top().ub);
  return {0.5 * (lb + ub), 0.5 * (ub - lb)};
}

CertifiedScalar hausdorff_distance(const CompactScene& K, const CompactScene& Kt, double tol) {
  if (K.empty() || Kt.empty()) fail(ErrorCode::EmptyScene, "hausdorff_distance");
  const SetDistance dK(K), dKt(Kt);
  const CertifiedScalar a = one_sided_hausdorff(K, dKt, tol), b = one_sided_hausdorff(Kt, dK, tol);
  const double lo = std::max(a.lo(), b.lo()), hi = std::max(a.hi(), b.hi());
  return {0.5 * (lo + hi), 0.5 * (hi - lo)};
}

namespace {

// Complement of box \ scene inside the outer square: scene, box boundary, and
// the frame between the box and the outer square (as four filled rectangles).
CompactScene complement_set(const CompactScene& D, Point c, double outer, bool add_frame) {
  CompactScene out = with_box_boundary(D, D.box_center, D.box_radius);
  out.box_center = c;
  out.box_radius = outer;
  if (!add_frame) return out;
  const Point lo = D.box_lo(), hi = D.box_hi();
  const double L = c.x - outer, R = c.x + outer, B = c.y - outer, T = c.y + outer;
  auto rect = [&](double x0, double y0, double x1, double y1) {
    if (x1 - x0 > kEps && y1 - y0 > kEps) out.solids.push_back({{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}});
  };
  rect(L, B, R, lo.y);
  rect(L, hi.y, R, T);
  rect(L, lo.y, lo.x, hi.y);
  rect(hi.x, lo.y, R, hi.y);
  return out;
}

}  // namespace

CertifiedScalar hausdorff_complementary_distance(const CompactScene& D, const CompactScene& Dt, double outer_radius,
                                                 double tol) {
  const Point c = D.box_center;
  auto fits = [&](const CompactScene& s) {
    return std::abs(s.box_center.x - c.x) + s.box_radius <= outer_radius * (1 + 1e-12) &&
           std::abs(s.box_center.y - c.y) + s.box_radius <= outer_radius * (1 + 1e-12);
  };
  if (!fits(D) || !fits(Dt)) fail(ErrorCode::InvalidArgument, "scene box exceeds outer box");
  // With equal boxes the frame outside the box is common to both sets and,
  // since the box boundary is included, cannot change the distance.
  const bool same_box = D.box_center == Dt.box_center && D.box_radius == Dt.box_radius;
  return hausdorff_distance(complement_set(D, c, outer_radius, !same_box), complement_set(Dt, c, outer_radius, !same_box),
                            tol);
}

double hausdorff_points(const std::vector<Point>& A, const std::vector<Point>& B) {
  if (A.empty() || B.empty()) fail(ErrorCode::EmptyScene, "hausdorff_points");
  auto one = [](const std::vector<Point>& X, const std::vector<Point>& Y) {
    double m = 0.0;
    for (const Point& x : X) {
      double d = std::numeric_limits<double>::infinity();
      for (const Point& y : Y) d = std::min(d, dist(x, y));
      m = std::max(m, d);
    }
    return m;
  };
  return std::max(one(A, B), one(B, A));
}

}  // namespace mosco::geom
