/**
 * @file common.cpp
 * @brief Shared experiment helpers and small fixtures.
 */
#include "common.hpp"

#include <cmath>

#include "mosco/core/error.hpp"

namespace mosco::exp {

pde::SourceData LinearSource::data() const {
  pde::SourceData d;
  const double a = c0, b = c1, c = c2;
  d.f = [a, b, c](Point x) { return a + b * x.x + c * x.y; };
  if (F.x != 0 || F.y != 0) {
    const Point G = F;
    d.F = [G](Point) { return G; };
  }
  return d;
}

nlohmann::json LinearSource::to_json() const { return {{"f", {c0, c1, c2}}, {"F", {F.x, F.y}}}; }

LinearSource LinearSource::from_json(const nlohmann::json& j) {
  LinearSource s;
  try {
    if (j.contains("f")) {
      const auto& f = j.at("f");
      if (!f.is_array() || f.size() != 3) fail(ErrorCode::MalformedSpec, "source.f must be [c0, c1, c2]");
      s.c0 = f[0].get<double>();
      s.c1 = f[1].get<double>();
      s.c2 = f[2].get<double>();
    }
    if (j.contains("F")) {
      const auto& F = j.at("F");
      if (!F.is_array() || F.size() != 2) fail(ErrorCode::MalformedSpec, "source.F must be [F1, F2]");
      s.F = {F[0].get<double>(), F[1].get<double>()};
    }
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::MalformedSpec, std::string("bad source: ") + e.what());
  }
  return s;
}

CompactScene rotated_crack(double angle, double length, double box, Point center) {
  const Point d{0.5 * length * std::cos(angle), 0.5 * length * std::sin(angle)};
  geom::SceneSpec s;
  s.box_radius = box;
  s.cracks = {{center - d, center + d}};
  return geom::build_compact_set(s);
}

namespace detail {

void require_fr_pieces(const CompactScene& s, const classlab::ClassParams& p, const std::string& what) {
  const auto dec = classlab::trivial_decomposition(s, false);
  for (std::size_t i = 0; i < dec.pieces.size(); ++i) {
    const auto r = classlab::check_fr(s, dec.pieces[i], p.r, p.L, p.M0);
    if (!r.verdict.pass())
      fail(ErrorCode::ClassCheckFailed, what + ": crack " + std::to_string(i) + " is " + classlab::to_string(r.verdict.status) +
                                            " for FR(r=" + std::to_string(p.r) + ", L=" + std::to_string(p.L) + ")");
  }
}

std::vector<geom::Segment> crack_segments(const CompactScene& s) {
  std::vector<geom::Segment> out;
  for (const auto& seg : s.crack_segments())
    if (seg.length() > 0) out.push_back(seg);
  return out;
}

nlohmann::json params_json(const classlab::ClassParams& p) { return classlab::params_to_json(p); }

CompactScene rebox(CompactScene s, double radius) {
  s.box_center = {0, 0};
  s.box_radius = radius;
  for (const Point& v : s.vertices())
    if (!s.in_box(v)) fail(ErrorCode::OutOfBox, "scene does not fit the enlarged box");
  return s;
}

}  // namespace detail
}  // namespace mosco::exp
