/**
 * @file gluing.cpp
 * @brief Separation of FR pieces away from their anchor sets.
 *
 * g(x) = dist(x, other pieces) - omega(dist(x, anchor)) is bounded below on
 * a sub-segment of length l with midpoint m by
 *   d_o(m) - l/2 - omega(delta(m) + l/2),
 * since both distances are 1-Lipschitz and omega is nondecreasing.
 */
#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "detail.hpp"
#include "mosco/classlab/checks.hpp"
#include "mosco/geom/set_distance.hpp"

namespace mosco::classlab {

namespace {

struct Item {
  Segment s;
};

std::vector<Segment> piece_segments(const CompactScene& scene, const Piece& pc) {
  std::vector<Segment> out;
  for (const ArcRef& a : pc.arcs) {
    auto s = materialize(scene, a).segments();
    out.insert(out.end(), s.begin(), s.end());
  }
  return out;
}

}  // namespace

GluingReport check_gluing(const CompactScene& scene, const Decomposition& dec, Anchor anchor, const Modulus& omega,
                          const CheckOptions& opt) {
  GluingReport rep;
  rep.measured_a = std::numeric_limits<double>::infinity();
  if (dec.pieces.size() < 2) {
    rep.verdict.status = Status::PASS;
    const Point p = scene.cracks.empty() ? Point{} : scene.cracks.front().pts.front();
    rep.verdict.witnesses = {{p, "GLUE.vacuous", 0.0}};
    return rep;
  }
  const double tol = opt.tol;
  const double min_len = std::max(1e-12, tol * 1e-4);
  std::vector<std::vector<Segment>> segs;
  for (const Piece& pc : dec.pieces) segs.push_back(piece_segments(scene, pc));

  double best_g = std::numeric_limits<double>::infinity();
  Point best_at{};
  bool violated = false;
  long unresolved = 0;

  for (std::size_t i = 0; i < dec.pieces.size(); ++i) {
    std::vector<Segment> others;
    for (std::size_t j = 0; j < segs.size(); ++j)
      if (j != i) others.insert(others.end(), segs[j].begin(), segs[j].end());
    const geom::SetDistance d_other(others, {});
    const std::vector<Point> A =
        anchor == Anchor::SING ? sing_points(scene, dec.pieces[i]) : bdry_points(scene, dec.pieces[i]);
    auto delta = [&](Point x) { return A.empty() ? std::numeric_limits<double>::infinity() : detail::distance_to_points(x, A); };

    std::vector<Item> stack;
    for (const Segment& s : segs[i]) stack.push_back({s});
    while (!stack.empty()) {
      const Segment s = stack.back().s;
      stack.pop_back();
      const Point m = geom::lerp(s.a, s.b, 0.5);
      const double l = s.length();
      const double dm = delta(m), dom = d_other(m);
      const double g = dom - omega(dm);
      if (g < best_g) {
        best_g = g;
        best_at = m;
      }
      if (g < -tol) violated = true;
      const double lb = dom - l / 2 - omega(dm + l / 2);
      // Once a violation is known, only regions that may hold a worse one are refined.
      const double target = violated ? std::min(-tol, best_g) : -tol;
      if (lb >= target) continue;
      if (l <= (violated ? std::max(min_len, tol) : min_len)) {
        if (!violated) ++unresolved;
        continue;
      }
      stack.push_back({{s.a, m}});
      stack.push_back({{m, s.b}});
    }

    if (omega.is_linear()) {
      const double d0 = omega.delta0();
      for (const Segment& s : segs[i]) {
        const int n = std::clamp(static_cast<int>(std::ceil(s.length() / (tol / 2))), 1, 200000);
        for (int k = 0; k <= n; ++k) {
          const Point x = s.at(static_cast<double>(k) / n);
          const double dl = delta(x);
          if (!(dl > 1e-9) || dl > d0) continue;
          rep.measured_a = std::min(rep.measured_a, d_other(x) / dl);
        }
      }
    }
  }

  if (violated) {
    rep.verdict.status = Status::FAIL;
    rep.verdict.witnesses = {{best_at, "GLUE.separation", best_g}};
  } else if (unresolved > 0) {
    rep.verdict.status = Status::UNKNOWN;
    rep.verdict.witnesses = {{best_at, "GLUE.unresolved", static_cast<double>(unresolved)}};
  } else {
    rep.verdict.status = Status::PASS;
    rep.verdict.witnesses = {{best_at, "GLUE.separation", best_g}};
  }
  return rep;
}

}  // namespace mosco::classlab
