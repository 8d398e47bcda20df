/**
 * @file bounds.cpp
 * @brief Points far from the singular set and the packing bound on piece counts.
 */
#include <cmath>
#include <limits>

#include "detail.hpp"
#include "mosco/classlab/checks.hpp"
#include "mosco/core/error.hpp"

namespace mosco::classlab {

double sbar_value(double rbar, double L, int M0) {
  return static_cast<double>(static_cast<long double>(rbar) /
                             (4.0L * std::pow(64.0L * static_cast<long double>(L) * L, static_cast<long double>(M0))));
}

FarPoint far_point_from_singular(const CompactScene& scene, const Decomposition& dec, Point x, double rbar, double L,
                                 int M0) {
  if (!(rbar > 0)) fail(ErrorCode::InvalidArgument, "rbar must be positive");
  double dK = std::numeric_limits<double>::infinity();
  for (const Segment& s : scene.crack_segments()) dK = std::min(dK, geom::point_segment_distance(x, s));
  if (!(dK <= 1e-9)) fail(ErrorCode::NotOnSet, "point is not on the crack set");

  std::vector<Point> sing;
  for (const Piece& pc : dec.pieces) {
    auto s = sing_points(scene, pc);
    sing.insert(sing.end(), s.begin(), s.end());
  }
  FarPoint fp;
  fp.sbar = sbar_value(rbar, L, M0);
  fp.distance = -1.0;
  const double h = rbar / 512;
  for (const Piece& pc : dec.pieces)
    for (const ArcRef& ref : pc.arcs) {
      const Arc a = materialize(scene, ref);
      for (const Sample& smp : sample_polyline(a.pts, h)) {
        if (geom::dist(smp.p, x) >= rbar / 2) continue;
        const double d = detail::distance_to_points(smp.p, sing);
        if (d > fp.distance) {
          fp.distance = d;
          fp.y = smp.p;
        }
      }
    }
  if (fp.distance < fp.sbar)
    fail(ErrorCode::SearchFailed, "no point of B(x, rbar/2) ∩ K at distance >= sbar from sing(K)");
  return fp;
}

std::uint64_t component_bound(const ClassParams& params, double R) {
  params.validate();
  const long double sb = sbar_value(params.r, params.L, params.M0);
  const long double w = params.omega(static_cast<double>(sb));
  if (!(w > 0)) fail(ErrorCode::InvalidArgument, "omega(sbar) must be positive");
  // pi (R+1)^2 / (pi (w/2)^2)
  const long double m = std::ceil(4.0L * (R + 1.0L) * (R + 1.0L) / (w * w) - 1e-9L);
  if (m >= static_cast<long double>(std::numeric_limits<std::uint64_t>::max())) return std::numeric_limits<std::uint64_t>::max();
  return static_cast<std::uint64_t>(m);
}

}  // namespace mosco::classlab
