/**
 * @file fixtures.cpp
 * @brief Named geometric fixtures.
 */
#include "mosco/exp/fixtures.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace mosco::exp {

namespace {

CompactScene build(std::vector<std::vector<Point>> cracks, double box) {
  geom::SceneSpec s;
  s.box_radius = box;
  s.cracks = std::move(cracks);
  return geom::build_compact_set(s);
}

Point polar(double r, double a) { return {r * std::cos(a), r * std::sin(a)}; }

ClassFixture fixture(std::string name, CompactScene sc, classlab::Decomposition w, const classlab::ClassParams& p) {
  ClassFixture f;
  f.name = std::move(name);
  f.scene = std::move(sc);
  f.witness = std::move(w);
  f.params = p;
  return f;
}

}  // namespace

CompactScene segment_scene(Point a, Point b, double box) { return build({{a, b}}, box); }

CompactScene circle_scene(int n, double radius, double box) {
  std::vector<Point> p;
  for (int i = 0; i < n; ++i) p.push_back(polar(radius, 2 * std::numbers::pi * i / n));
  p.push_back(p.front());
  return build({p}, box);
}

CompactScene plus_sign_arms(double theta) {
  std::vector<std::vector<Point>> arms;
  for (double a : {0.0, theta, std::numbers::pi, std::numbers::pi + theta}) arms.push_back({{0, 0}, polar(1, a)});
  return build(arms, 1.5);
}

CompactScene plus_sign_segments(double theta) {
  return build({{polar(1, std::numbers::pi), {0, 0}, polar(1, 0)}, {polar(1, std::numbers::pi + theta), {0, 0}, polar(1, theta)}},
               1.5);
}

CompactScene tangent_pair(double beta) {
  const double tmax = 1 / std::sqrt(beta);
  std::vector<double> ts;
  for (int k = 0; k <= 12; ++k) ts.push_back(tmax * std::ldexp(1.0, -k));
  for (int k = 1; k < 64; ++k) ts.push_back(tmax * k / 64);
  ts.push_back(0.0);
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
  std::vector<Point> par;
  for (double t : ts) par.push_back({t, beta * t * t});
  return build({{{0, 0}, {1, 0}}, par}, 1.5);
}

CompactScene pacman(double n, int vertices) {
  const double a0 = 1 / n, a1 = 2 * std::numbers::pi;
  const int m = std::max(8, static_cast<int>(std::ceil(vertices * (a1 - a0) / a1)));
  std::vector<Point> p;
  for (int i = 0; i <= m; ++i) p.push_back(polar(1, a0 + (a1 - a0) * i / m));
  p.back() = {1, 0};
  return build({p}, 1.5);
}

CompactScene l_shape() { return build({{{0, 0}, {1, 0}, {1, 1}}}, 1.5); }

std::vector<ClassFixture> class_fixture_suite() {
  using classlab::ArcRef;
  using classlab::Modulus;
  std::vector<ClassFixture> out;
  classlab::ClassParams base;
  base.r = 0.1;
  base.L = 2.0;
  base.M0 = 2;
  base.delta0 = 0.5;

  {
    ClassFixture f = fixture("segment", segment_scene(), {}, base);
    f.witness.pieces = {{{ArcRef{0, 0.0, 0.5}, ArcRef{0, 0.5, 1.0}}}};
    f.g_class = true;
    f.cone = {0.05, 0.1};
    out.push_back(f);
  }
  {
    ClassFixture f = fixture("l_shape", l_shape(), {}, base);
    f.witness.pieces = {{{ArcRef{0, 0.0, 1.0}, ArcRef{0, 1.0, 2.0}}}};
    f.g_class = true;
    f.cone = {0.05, 0.1};
    out.push_back(f);
  }
  for (int deg : {90, 60, 30}) {
    const double th = deg * std::numbers::pi / 180;
    ClassFixture f = fixture("plus_" + std::to_string(deg), plus_sign_arms(th), classlab::trivial_decomposition(plus_sign_arms(th), false),
                   base);
    f.params.a = std::sin(th);
    f.params.omega = Modulus::linear(std::sin(th), 0.5);
    f.gluing = true;
    f.g_class = true;  // fails: four branches at the center
    f.cone = {0.05, 0.1};
    out.push_back(f);
  }
  for (double beta : {1.0, 4.0, 16.0, 64.0}) {
    const auto sc = tangent_pair(beta);
    ClassFixture f = fixture("tangent_" + std::to_string(static_cast<int>(beta)), sc, classlab::trivial_decomposition(sc, false), base);
    f.params.omega = Modulus::quadratic(0.5);
    f.gluing = true;
    out.push_back(f);
  }
  for (double n : {4.0, 16.0}) {
    const auto sc = pacman(n);
    ClassFixture f = fixture("pacman_" + std::to_string(static_cast<int>(n)), sc, classlab::trivial_decomposition(sc, false), base);
    // The single arc needs chart balls smaller than the gap 2 sin(1/(2n)).
    f.params.r = std::min(base.r, std::sin(0.5 / n));
    f.g_class = true;
    f.cone = {0.05, 0.1};
    out.push_back(f);
  }
  {
    const auto sc = circle_scene();
    ClassFixture f = fixture("circle", sc, classlab::trivial_decomposition(sc, false), base);
    f.g_class = true;
    f.cone = {0.05, 0.1};
    out.push_back(f);
  }
  return out;
}

}  // namespace mosco::exp
