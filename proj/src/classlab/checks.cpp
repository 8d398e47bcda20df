/**
 * @file checks.cpp
 * @brief MR arcs, FR pieces, singular/boundary sets and decomposition validation.
 */
#include "mosco/classlab/checks.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "detail.hpp"
#include "mosco/core/error.hpp"

namespace mosco::classlab {

namespace detail {

std::vector<Segment> clip_segments(const std::vector<Segment>& segs, Point c, double rho) {
  std::vector<Segment> out;
  for (const Segment& s : segs) {
    if (s.a == s.b) {
      if (geom::dist(s.a, c) <= rho) out.push_back(s);
      continue;
    }
    double t0, t1;
    if (geom::clip_to_disk(s, c, rho, t0, t1)) out.push_back({s.at(t0), s.at(t1)});
  }
  return out;
}

bool endpoint_half_graph(Point e, const std::vector<Segment>& in_ball, double alpha) {
  const DirectionSpan span = chord_span(in_ball);
  if (span.empty) return true;
  if (!span_fits(span, alpha)) return false;
  double lo, hi;
  if (!oriented_span(e, in_ball, lo, hi)) return false;
  if (hi - lo > 2 * alpha + 1e-12) return false;
  // theta must be within alpha - half of the chord-span center (mod pi) and
  // within alpha of every oriented direction.
  const double m = std::max(0.0, alpha - span.half) + 1e-12;
  const double a0 = hi - alpha - 1e-12, a1 = lo + alpha + 1e-12;
  for (int k = -4; k <= 4; ++k) {
    const double b0 = span.center - m + k * std::numbers::pi, b1 = span.center + m + k * std::numbers::pi;
    if (std::max(a0, b0) <= std::min(a1, b1)) return true;
  }
  return false;
}

std::vector<Point> dedupe(const std::vector<Point>& pts, double tol) {
  std::vector<Point> out;
  for (const Point& p : pts) {
    bool seen = false;
    for (const Point& q : out) seen = seen || geom::dist(p, q) <= tol;
    if (!seen) out.push_back(p);
  }
  return out;
}

double distance_to_points(Point p, const std::vector<Point>& pts) {
  double d = std::numeric_limits<double>::infinity();
  for (const Point& q : pts) d = std::min(d, geom::dist(p, q));
  return d;
}

}  // namespace detail

using detail::slope_angle;

std::vector<Point> compute_boundary_points(const Arc& arc) {
  if (arc.closed) return {};
  if (arc.pts.size() == 1) return {arc.pts[0]};
  return {arc.pts.front(), arc.pts.back()};
}

namespace {

// Smallest chord/length ratio over sub-arcs contained in an open ball B_r(p)
// centred at a sample point p = start of the sub-arc.
double min_chord_arc(const Arc& arc, double r, double h, Point& where) {
  if (arc.pts.size() < 2) return 1.0;
  std::vector<Sample> S = sample_polyline(arc.pts, h);
  const std::size_t n = S.size();
  const double total = S.back().s;
  if (arc.closed) {
    // Second lap so windows may wrap past the seam.
    for (std::size_t k = 1; k < n; ++k) S.push_back({S[k].p, S[k].s + total, S[k].seg});
  }
  double best = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    double maxd = 0.0;
    for (std::size_t j = i + 1; j < S.size(); ++j) {
      const double arcl = S[j].s - S[i].s;
      if (arc.closed && arcl >= total) break;
      const double c = geom::dist(S[i].p, S[j].p);
      maxd = std::max(maxd, c);
      if (maxd >= r) break;
      if (arcl <= 0) continue;
      const double ratio = c / arcl;
      if (ratio < best) {
        best = ratio;
        where = S[i].p;
      }
    }
  }
  return best;
}

}  // namespace

Verdict check_mr(const Arc& arc, double r, double L, const CheckOptions& opt) {
  if (!(r > 0) || !(L >= 1)) fail(ErrorCode::InvalidArgument, "check_mr needs r > 0 and L >= 1");
  Verdict v;
  const double alpha = slope_angle(L);
  const double h = std::min(opt.tol / 2, r / 16);

  Point wp = arc.pts.front();
  const double ratio = min_chord_arc(arc, r, h, wp);
  if (ratio < (1.0 / (L * L)) * (1 - 1e-9)) {
    v.status = Status::FAIL;
    v.witnesses.push_back({wp, "MR.chord_arc", ratio});
    return v;
  }

  const auto segs = arc.segments();
  bool ok = true;
  double worst = 1.0;
  Point worst_at = arc.pts.front();
  for (const Sample& c : sample_polyline(arc.pts, r / 8)) {
    const DirectionSpan span = chord_span(detail::clip_segments(segs, c.p, r * 17 / 16));
    const double need = detail::needed_L(span);
    if (need > worst) {
      worst = need;
      worst_at = c.p;
    }
    if (!detail::span_fits(span, alpha)) {
      ok = false;
      v.witnesses.push_back({c.p, "MR.graph_slope", need});
    }
  }
  for (const Point& e : compute_boundary_points(arc)) {
    if (!detail::endpoint_half_graph(e, detail::clip_segments(segs, e, r), alpha)) {
      ok = false;
      v.witnesses.push_back({e, "MR.endpoint", 0.0});
    }
  }
  if (ok) {
    v.status = Status::PASS;
    v.witnesses = {{worst_at, "MR.graph_slope", worst}};
  } else {
    v.status = Status::UNKNOWN;
  }
  return v;
}

namespace {

std::vector<Arc> materialize_piece(const CompactScene& scene, const Piece& piece) {
  std::vector<Arc> arcs;
  for (const ArcRef& a : piece.arcs) arcs.push_back(materialize(scene, a));
  return arcs;
}

std::vector<Segment> union_segments(const std::vector<Arc>& arcs) {
  std::vector<Segment> segs;
  for (const Arc& a : arcs) {
    auto s = a.segments();
    segs.insert(segs.end(), s.begin(), s.end());
  }
  return segs;
}

}  // namespace

std::vector<Point> sing_points(const CompactScene& scene, const Piece& piece) {
  std::vector<Point> pts;
  for (const Arc& a : materialize_piece(scene, piece)) {
    auto b = compute_boundary_points(a);
    pts.insert(pts.end(), b.begin(), b.end());
  }
  return detail::dedupe(pts, 1e-12);
}

std::vector<Point> bdry_points(const CompactScene& scene, const Piece& piece) {
  const auto arcs = materialize_piece(scene, piece);
  const auto segs = union_segments(arcs);
  std::vector<Point> out;
  for (const Arc& a : arcs)
    for (const Point& e : compute_boundary_points(a)) {
      std::vector<Segment> local;
      for (const Segment& s : segs)
        if (geom::point_segment_distance(e, s) <= 1e-9) local.push_back(s);
      if (branch_count(e, local) <= 1) out.push_back(e);
    }
  return detail::dedupe(out, 1e-12);
}

FrResult check_fr(const CompactScene& scene, const Piece& piece, double r, double L, int M0, const CheckOptions& opt) {
  if (piece.arcs.empty()) fail(ErrorCode::MalformedSpec, "piece without arcs");
  if (static_cast<int>(piece.arcs.size()) > M0)
    fail(ErrorCode::TooManyArcs, std::to_string(piece.arcs.size()) + " arcs > M0 = " + std::to_string(M0));
  FrResult res;
  res.sing = sing_points(scene, piece);
  const auto arcs = materialize_piece(scene, piece);

  bool all_pass = true;
  for (const Arc& a : arcs) {
    const Verdict va = check_mr(a, r, L, opt);
    if (va.failed()) {
      res.verdict = va;
      return res;
    }
    all_pass = all_pass && va.pass();
  }

  // Necessary: no point of the union may have three or more branches.
  std::vector<std::pair<Segment, std::size_t>> tagged;
  for (std::size_t k = 0; k < arcs.size(); ++k)
    for (const Segment& s : arcs[k].segments()) tagged.push_back({s, k});
  std::vector<Point> cand;
  for (const Arc& a : arcs) cand.insert(cand.end(), a.pts.begin(), a.pts.end());
  for (std::size_t i = 0; i < tagged.size(); ++i)
    for (std::size_t j = i + 1; j < tagged.size(); ++j) {
      if (tagged[i].second == tagged[j].second || !detail::boxes_meet(tagged[i].first, tagged[j].first, 1e-9)) continue;
      auto x = geom::segment_intersections(tagged[i].first, tagged[j].first);
      cand.insert(cand.end(), x.begin(), x.end());
    }
  const auto segs = union_segments(arcs);
  for (const Point& p : detail::dedupe(cand, 1e-12)) {
    std::vector<Segment> local;
    for (const Segment& s : segs)
      if (geom::point_segment_distance(p, s) <= 1e-9) local.push_back(s);
    const int b = branch_count(p, local);
    if (b >= 3) {
      res.verdict.status = Status::FAIL;
      res.verdict.witnesses = {{p, "FR.branch_count", static_cast<double>(b)}};
      return res;
    }
  }

  // Necessary: a chart at x maps K ∩ B(x, r/L^2) into a convex piece of the
  // (half-)line inside Φ(K ∩ B_r(x)), so points closer than r/L^2 are joined
  // inside K. Distinct components of the union must keep that distance.
  {
    std::vector<std::size_t> comp(segs.size());
    for (std::size_t i = 0; i < segs.size(); ++i) comp[i] = i;
    auto find = [&](std::size_t i) {
      while (comp[i] != i) i = comp[i] = comp[comp[i]];
      return i;
    };
    for (std::size_t i = 0; i < segs.size(); ++i)
      for (std::size_t j = i + 1; j < segs.size(); ++j)
        if (detail::boxes_meet(segs[i], segs[j], 1e-12) && geom::segment_segment_distance(segs[i], segs[j]) <= 1e-12)
          comp[find(i)] = find(j);
    const double need = r / (L * L);
    for (std::size_t i = 0; i < segs.size(); ++i)
      for (std::size_t j = i + 1; j < segs.size(); ++j) {
        if (find(i) == find(j) || !detail::boxes_meet(segs[i], segs[j], need)) continue;
        const double d = geom::segment_segment_distance(segs[i], segs[j]);
        if (d < need) {
          res.verdict.status = Status::FAIL;
          const Point at = geom::point_segment_distance(segs[i].a, segs[j]) <= geom::point_segment_distance(segs[i].b, segs[j])
                               ? segs[i].a
                               : segs[i].b;
          res.verdict.witnesses = {{at, "FR.separation", d}};
          return res;
        }
      }
  }

  // Sufficient: the union is a graph in every chart ball.
  const double alpha = slope_angle(L);
  bool global = true;
  double worst = 1.0;
  Point worst_at = arcs.front().pts.front();
  for (const Arc& a : arcs)
    for (const Sample& c : sample_polyline(a.pts, r / 8)) {
      const DirectionSpan span = chord_span(detail::clip_segments(segs, c.p, r * 17 / 16));
      const double need = detail::needed_L(span);
      if (need > worst) {
        worst = need;
        worst_at = c.p;
      }
      if (!detail::span_fits(span, alpha)) {
        global = false;
        res.verdict.witnesses.push_back({c.p, "FR.graph_slope", need});
      }
    }
  if (all_pass && global) {
    res.verdict.status = Status::PASS;
    res.verdict.witnesses = {{worst_at, "FR.graph_slope", worst}};
  } else {
    res.verdict.status = Status::UNKNOWN;
  }
  return res;
}

std::vector<std::string> validate_decomposition(const CompactScene& scene, const Decomposition& dec) {
  std::vector<std::string> problems;
  auto where = [](Point p) { return "(" + std::to_string(p.x) + ", " + std::to_string(p.y) + ")"; };

  // Coverage, per polyline, in parameter space.
  std::vector<std::vector<std::pair<double, double>>> cover(scene.cracks.size());
  for (const Piece& pc : dec.pieces)
    for (const ArcRef& a : pc.arcs) {
      try {
        (void)materialize(scene, a);
      } catch (const Error& e) {
        problems.push_back(e.what());
        continue;
      }
      cover[static_cast<std::size_t>(a.polyline)].push_back({a.start, a.end});
    }
  for (std::size_t k = 0; k < scene.cracks.size(); ++k) {
    auto& iv = cover[k];
    if (iv.empty()) {
      problems.push_back("crack " + std::to_string(k) + " is not covered");
      continue;
    }
    std::sort(iv.begin(), iv.end());
    const auto& pl = scene.cracks[k];
    const double last = pl.is_point() ? 0.0 : static_cast<double>(pl.pts.size() - 1);
    // Parameter gaps are converted to lengths on the segment they fall in.
    auto gap_len = [&](double t0, double t1) {
      const std::size_t i = std::min(static_cast<std::size_t>(std::floor(t0)), pl.pts.size() - 2);
      return (t1 - t0) * pl.segment(i).length();
    };
    double reach = 0.0;
    for (const auto& [a, b] : iv) {
      if (a > reach && gap_len(reach, a) > 1e-9) problems.push_back("gap in coverage of crack " + std::to_string(k));
      reach = std::max(reach, b);
    }
    if (reach < last && gap_len(reach, last) > 1e-9) problems.push_back("crack " + std::to_string(k) + " end not covered");
  }
  if (!problems.empty()) return problems;

  // Pieces may meet only at points singular for both.
  std::vector<std::vector<Segment>> segs;
  std::vector<std::vector<Point>> sing;
  for (const Piece& pc : dec.pieces) {
    segs.push_back(union_segments(materialize_piece(scene, pc)));
    sing.push_back(sing_points(scene, pc));
  }
  for (std::size_t i = 0; i < segs.size(); ++i)
    for (std::size_t j = i + 1; j < segs.size(); ++j)
      for (const Segment& s : segs[i])
        for (const Segment& t : segs[j]) {
          if (!detail::boxes_meet(s, t, 1e-9)) continue;
          const auto x = geom::segment_intersections(s, t);
          if (x.size() == 2 && geom::dist(x[0], x[1]) > 1e-9) {
            problems.push_back("pieces " + std::to_string(i) + " and " + std::to_string(j) + " overlap near " + where(x[0]));
            continue;
          }
          for (const Point& p : x)
            if (detail::distance_to_points(p, sing[i]) > 1e-9 || detail::distance_to_points(p, sing[j]) > 1e-9)
              problems.push_back("pieces " + std::to_string(i) + " and " + std::to_string(j) + " meet at " + where(p) +
                                 " outside sing");
        }
  return problems;
}

}  // namespace mosco::classlab
