/**
 * @file gclass.cpp
 * @brief Cone-condition class: 1-D Gagliardo covers, the class check and the
 * constructive passage to FR decompositions.
 *
 * Inside a chart ball the set is a graph over the line with direction theta,
 * so its flattened image is the projection u = (p - c) . (cos theta, sin theta)
 * and the pieces of K in the ball map to intervals. Projections of distinct
 * runs that touch share a point (graph property), so merged intervals are the
 * connected pieces of the flattened image.
 */
#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "detail.hpp"
#include "mosco/classlab/checks.hpp"
#include "mosco/core/error.hpp"

namespace mosco::classlab {

std::vector<Interval1> gagliardo_decompose(const std::vector<Interval1>& S, const ConeSpec& cone) {
  const double l = cone.length, rho = cone.rho;
  if (!(l > 0)) fail(ErrorCode::InvalidArgument, "cone length must be positive");
  for (std::size_t k = 0; k < S.size(); ++k) {
    if (!(S[k].first <= S[k].second)) fail(ErrorCode::InvalidArgument, "interval with a > b");
    if (k > 0 && !(S[k - 1].second < S[k].first)) fail(ErrorCode::InvalidArgument, "intervals must be sorted and disjoint");
  }
  for (const auto& [a, b] : S)
    if (b - a < l - 1e-12 * std::max(1.0, std::abs(b)))
      fail(ErrorCode::ConeConditionFails,
           "no interval of length " + std::to_string(l) + " through " + std::to_string(0.5 * (a + b)));
  if (!(rho >= l)) fail(ErrorCode::InvalidArgument, "rho must be >= the cone length");
  std::vector<Interval1> out;
  for (const auto& [a, b] : S) {
    const double len = b - a;
    if (len <= rho) {
      out.push_back({a, b});
      continue;
    }
    const int n = static_cast<int>(std::ceil(len / rho - 1e-12));
    for (int k = 0; k < n; ++k) {
      const double s0 = a + k * (len - rho) / (n - 1);
      out.push_back({s0, k == n - 1 ? b : s0 + rho});
    }
  }
  return out;
}

namespace {

Point point_at(const geom::Polyline& pl, double t) {
  if (pl.is_point()) return pl.pts[0];
  const std::size_t i = std::min(static_cast<std::size_t>(std::floor(t)), pl.pts.size() - 2);
  return geom::lerp(pl.pts[i], pl.pts[i + 1], t - static_cast<double>(i));
}

// Connected pieces of a polyline inside a closed disk, as parameter ranges.
struct Run {
  int poly;
  double t0, t1;
};

std::vector<Run> clip_runs(const CompactScene& sc, Point c, double rho) {
  std::vector<Run> out;
  for (std::size_t k = 0; k < sc.cracks.size(); ++k) {
    const auto& pl = sc.cracks[k];
    if (pl.is_point()) {
      if (geom::dist(pl.pts[0], c) <= rho) out.push_back({static_cast<int>(k), 0.0, 0.0});
      continue;
    }
    bool open = false;
    for (std::size_t i = 0; i < pl.segment_count(); ++i) {
      double a, b;
      if (!geom::clip_to_disk(pl.segment(i), c, rho, a, b)) {
        open = false;
        continue;
      }
      const double t0 = static_cast<double>(i) + a, t1 = static_cast<double>(i) + b;
      if (open && a == 0.0 && out.back().t1 == t0) {
        out.back().t1 = t1;
      } else {
        out.push_back({static_cast<int>(k), t0, t1});
      }
      open = b == 1.0;
    }
  }
  return out;
}

struct Chart {
  Point c;
  Point u;
  double proj(Point p) const { return geom::dot(p - c, u); }
};

Interval1 run_interval(const CompactScene& sc, const Run& r, const Chart& ch) {
  const auto& pl = sc.cracks[static_cast<std::size_t>(r.poly)];
  double lo = ch.proj(point_at(pl, r.t0)), hi = lo;
  auto take = [&](Point p) {
    lo = std::min(lo, ch.proj(p));
    hi = std::max(hi, ch.proj(p));
  };
  take(point_at(pl, r.t1));
  for (double v = std::floor(r.t0) + 1; v < r.t1; v += 1) take(pl.pts[static_cast<std::size_t>(v)]);
  return {lo, hi};
}

std::vector<Interval1> merge(std::vector<Interval1> iv) {
  std::sort(iv.begin(), iv.end());
  std::vector<Interval1> out;
  for (const auto& x : iv) {
    if (!out.empty() && x.first <= out.back().second + 1e-12)
      out.back().second = std::max(out.back().second, x.second);
    else
      out.push_back(x);
  }
  return out;
}

const Interval1* containing(const std::vector<Interval1>& groups, double u) {
  for (const auto& g : groups)
    if (u >= g.first - 1e-12 && u <= g.second + 1e-12) return &g;
  return nullptr;
}

std::vector<Segment> crack_segments_only(const CompactScene& sc) { return sc.crack_segments(); }

}  // namespace

Verdict check_g_class(const CompactScene& scene, double r, double L, const ConeSpec& cone, const CheckOptions&) {
  if (!scene.solids.empty()) fail(ErrorCode::PreconditionNotMet, "the cone-condition class check takes cracks only");
  if (scene.cracks.empty()) fail(ErrorCode::EmptyScene, "no cracks");
  if (!(r > 0) || !(L >= 1) || !(cone.length > 0)) fail(ErrorCode::InvalidArgument, "bad class parameters");
  Verdict v;
  const auto segs = crack_segments_only(scene);

  // Necessary 1: at most two branches anywhere.
  std::vector<std::pair<Segment, std::pair<std::size_t, std::size_t>>> tagged;  // segment, (polyline, index)
  for (std::size_t k = 0; k < scene.cracks.size(); ++k) {
    const auto& pl = scene.cracks[k];
    if (pl.is_point()) tagged.push_back({{pl.pts[0], pl.pts[0]}, {k, 0}});
    for (std::size_t i = 0; i < pl.segment_count(); ++i) tagged.push_back({pl.segment(i), {k, i}});
  }
  std::vector<Point> cand = scene.vertices();
  std::vector<std::size_t> comp(scene.cracks.size());
  for (std::size_t k = 0; k < comp.size(); ++k) comp[k] = k;
  auto root = [&](std::size_t x) {
    while (comp[x] != x) x = comp[x] = comp[comp[x]];
    return x;
  };
  for (std::size_t i = 0; i < tagged.size(); ++i)
    for (std::size_t j = i + 1; j < tagged.size(); ++j) {
      const std::size_t ki = tagged[i].second.first, kj = tagged[j].second.first;
      if (!detail::boxes_meet(tagged[i].first, tagged[j].first, 1e-9)) continue;
      if (ki == kj) continue;  // polylines are simple
      const auto x = geom::segment_intersections(tagged[i].first, tagged[j].first);
      if (x.empty()) continue;
      cand.insert(cand.end(), x.begin(), x.end());
      comp[root(ki)] = root(kj);
    }
  for (const Point& p : detail::dedupe(cand, 1e-12)) {
    std::vector<Segment> local;
    for (const Segment& s : segs)
      if (geom::point_segment_distance(p, s) <= 1e-9) local.push_back(s);
    const int b = branch_count(p, local);
    if (b >= 3) {
      v.status = Status::FAIL;
      v.witnesses = {{p, "G.branch_count", static_cast<double>(b)}};
      return v;
    }
  }

  // Necessary 2: the preimage of an interval of length l has diameter >= l/L,
  // so every connected component must be at least that wide.
  const double lL = cone.length / L;
  for (std::size_t k = 0; k < scene.cracks.size(); ++k) {
    if (root(k) != k) continue;
    std::vector<Point> pts;
    for (std::size_t m = 0; m < scene.cracks.size(); ++m)
      if (root(m) == k) pts.insert(pts.end(), scene.cracks[m].pts.begin(), scene.cracks[m].pts.end());
    double diam = 0.0;
    for (std::size_t i = 0; i < pts.size() && diam < lL; ++i)
      for (std::size_t j = i + 1; j < pts.size(); ++j) diam = std::max(diam, geom::dist(pts[i], pts[j]));
    if (diam < lL * (1 - 1e-12)) {
      v.status = Status::FAIL;
      v.witnesses = {{pts.front(), "G.cone", diam}};
      return v;
    }
  }

  // Sufficient: graph in every chart ball, then intervals of length l/L
  // through the images of the points of the inner ball.
  const double alpha = detail::slope_angle(L);
  bool ok = true;
  double worst_len = std::numeric_limits<double>::infinity();
  Point worst_at = scene.cracks.front().pts.front();
  for (const auto& pl : scene.cracks)
    for (const Sample& c : sample_polyline(pl.pts, r / 8)) {
      const DirectionSpan span = chord_span(detail::clip_segments(segs, c.p, r * 17 / 16));
      if (!detail::span_fits(span, alpha)) {
        ok = false;
        v.witnesses.push_back({c.p, "G.graph_slope", detail::needed_L(span)});
        continue;
      }
      const Chart ch{c.p, {std::cos(span.center), std::sin(span.center)}};
      std::vector<Interval1> outer;
      for (const Run& run : clip_runs(scene, c.p, r - r / 16)) outer.push_back(run_interval(scene, run, ch));
      const auto groups = merge(outer);
      for (const Run& run : clip_runs(scene, c.p, r / 2 + r / 16)) {
        const Interval1 iv = run_interval(scene, run, ch);
        const Interval1* g = containing(groups, 0.5 * (iv.first + iv.second));
        const double len = g ? g->second - g->first : 0.0;
        if (len < worst_len) {
          worst_len = len;
          worst_at = c.p;
        }
        if (len < lL - 1e-12) {
          ok = false;
          v.witnesses.push_back({c.p, "G.cone", len});
        }
      }
    }
  if (ok) {
    v.status = Status::PASS;
    v.witnesses = {{worst_at, "G.cone", worst_len}};
  } else {
    v.status = Status::UNKNOWN;
  }
  return v;
}

GToFr g_to_fr_decompose(const CompactScene& scene, double r, double L, const ConeSpec& cone, const CheckOptions& opt) {
  if (!check_g_class(scene, r, L, cone, opt).pass())
    fail(ErrorCode::PreconditionNotMet, "the scene does not pass the cone-condition class check");
  const double lp = cone.length / L;
  const double rho = std::max(r / 4, lp);
  const auto segs = crack_segments_only(scene);

  std::vector<Point> centers;
  for (const auto& pl : scene.cracks)
    for (const Sample& s : sample_polyline(pl.pts, r / 64))
      if (detail::distance_to_points(s.p, centers) > r / 3) centers.push_back(s.p);

  GToFr out;
  Piece piece;
  std::size_t l_max = 0;
  for (const Point& x : centers) {
    const DirectionSpan span = chord_span(detail::clip_segments(segs, x, r));
    const Chart ch{x, {std::cos(span.center), std::sin(span.center)}};
    const auto runs = clip_runs(scene, x, r);
    std::vector<Interval1> riv;
    for (const Run& run : runs) riv.push_back(run_interval(scene, run, ch));
    const auto groups = merge(riv);
    std::vector<Interval1> hull(groups.size(), {std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()});
    for (const Run& run : clip_runs(scene, x, r / 3)) {
      const Interval1 iv = run_interval(scene, run, ch);
      for (std::size_t g = 0; g < groups.size(); ++g)
        if (&groups[g] == containing(groups, 0.5 * (iv.first + iv.second))) {
          hull[g].first = std::min(hull[g].first, iv.first);
          hull[g].second = std::max(hull[g].second, iv.second);
        }
    }
    std::size_t count = 0;
    for (std::size_t g = 0; g < groups.size(); ++g) {
      if (hull[g].first > hull[g].second) continue;
      const Interval1 I = groups[g];
      // Union of the length-lp subintervals of I meeting the inner hull.
      Interval1 T{std::max(I.first, hull[g].first - lp), std::min(I.second, hull[g].second + lp)};
      ConeSpec cs{lp, rho};
      if (T.second - T.first < lp) {
        if (I.second - I.first <= lp) {
          T = I;
          cs.length = I.second - I.first;
        } else {
          const double mid = 0.5 * (T.first + T.second);
          T = {std::clamp(mid - lp / 2, I.first, I.second - lp), 0.0};
          T.second = T.first + lp;
        }
      }
      if (!(cs.length > 0)) continue;
      for (const auto& [s0, s1] : gagliardo_decompose({T}, cs)) {
        for (std::size_t q = 0; q < runs.size(); ++q) {
          const Interval1 iv = riv[q];
          const double a = std::max(s0, iv.first), b = std::min(s1, iv.second);
          if (!(b - a > 1e-12) || containing(groups, 0.5 * (iv.first + iv.second)) != &groups[g]) continue;
          const auto& pl = scene.cracks[static_cast<std::size_t>(runs[q].poly)];
          const double ua = ch.proj(point_at(pl, runs[q].t0)), ub = ch.proj(point_at(pl, runs[q].t1));
          const bool inc = ub >= ua;
          // Monotone projection along the run: invert by bisection.
          auto tau_of = [&](double u) {
            if (std::abs(u - ua) <= 1e-14) return runs[q].t0;
            if (std::abs(u - ub) <= 1e-14) return runs[q].t1;
            double lo = runs[q].t0, hi = runs[q].t1;
            for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
              const double m = 0.5 * (lo + hi);
              const double um = ch.proj(point_at(pl, m));
              if ((um < u) == inc) lo = m; else hi = m;
            }
            return 0.5 * (lo + hi);
          };
          double ta = tau_of(a), tb = tau_of(b);
          if (ta > tb) std::swap(ta, tb);
          if (!(tb > ta)) continue;
          piece.arcs.push_back({runs[q].poly, ta, tb});
          ++count;
        }
      }
    }
    l_max = std::max(l_max, count);
  }
  out.decomposition.pieces = {piece};
  out.L_prime = L;
  out.M0 = static_cast<int>(centers.size() * l_max);

  double rp = rho / 2;
  for (int attempt = 0; attempt < 12; ++attempt, rp /= 2) {
    bool all = true;
    for (const ArcRef& a : piece.arcs) all = all && check_mr(materialize(scene, a), rp, L, opt).pass();
    if (all) {
      out.r_prime = rp;
      return out;
    }
  }
  fail(ErrorCode::PreconditionNotMet, "decomposition arcs do not pass the MR check at any tried radius");
}

}  // namespace mosco::classlab
