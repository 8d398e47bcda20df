/**
 * @file compare.cpp
 * @brief Triangle-matched field differences.
 */
#include "mosco/exp/compare.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_map>

#include "mosco/core/error.hpp"

namespace mosco::exp {

using geom::Point;
using pde::cplx;

bool segment_cuts_triangle(const geom::Segment& s, const Point& p0, const Point& p1, const Point& p2) {
  const Point P[3] = {p0, p1, p2};
  double area2 = geom::cross(p1 - p0, p2 - p0);
  const double orient = area2 > 0 ? 1.0 : -1.0;
  const double scale = std::max({geom::dist(p0, p1), geom::dist(p1, p2), geom::dist(p2, p0)});
  const double eps = 1e-9 * scale;
  double t0 = 0, t1 = 1;
  const Point d = s.b - s.a;
  for (int k = 0; k < 3; ++k) {
    const Point u = P[k], v = P[(k + 1) % 3];
    const Point e = v - u;
    // Inward normal distance: orient * cross(e, x - u) / |e| >= eps.
    const double len = geom::norm(e);
    const double f0 = orient * geom::cross(e, s.a - u) / len - eps;
    const double fd = orient * geom::cross(e, d) / len;
    if (std::abs(fd) < 1e-300) {
      if (f0 < 0) return false;
      continue;
    }
    const double t = -f0 / fd;
    if (fd > 0)
      t0 = std::max(t0, t);
    else
      t1 = std::min(t1, t);
    if (t0 >= t1) return false;
  }
  return (t1 - t0) * geom::norm(d) > 1e-12 * scale;
}

namespace {

struct Tri {
  Point x[3];
  cplx v[3];
  std::array<cplx, 2> grad;  // constant gradient
  bool present = false;
};

Tri load(const pde::FeField& u, int t) {
  const auto& m = *u.mesh;
  Tri T;
  T.present = true;
  for (int k = 0; k < 3; ++k) {
    T.x[k] = m.vertices[static_cast<std::size_t>(m.triangles[static_cast<std::size_t>(t)][static_cast<std::size_t>(k)])];
    T.v[k] = u.cat(t, k);
  }
  const double a2 = geom::cross(T.x[1] - T.x[0], T.x[2] - T.x[0]);
  T.grad = {cplx(0), cplx(0)};
  for (int k = 0; k < 3; ++k) {
    const Point p = T.x[(k + 1) % 3], q = T.x[(k + 2) % 3];
    T.grad[0] += T.v[k] * ((p.y - q.y) / a2);
    T.grad[1] += T.v[k] * ((q.x - p.x) / a2);
  }
  return T;
}

std::array<cplx, 2> scaled(const std::function<pde::Mat2(Point)>& sigma, Point c, std::array<cplx, 2> g) {
  if (!sigma) return g;
  const pde::Mat2 s = sigma(c).sqrt();
  return {s.a11 * g[0] + s.a12 * g[1], s.a12 * g[0] + s.a22 * g[1]};
}

}  // namespace

GridDifference grid_difference(const pde::FeField& a, const pde::FeField& b, const CompareOptions& opt) {
  if (!a.mesh || !b.mesh) fail(ErrorCode::InvalidArgument, "fields without meshes");
  a.validate();
  b.validate();
  const auto& ma = *a.mesh;
  const auto& mb = *b.mesh;
  if (ma.background_size != mb.background_size || std::abs(ma.h - mb.h) > 1e-15 * ma.h)
    fail(ErrorCode::InvalidArgument, "fields are not on a common background grid");
  if (!(opt.p >= 1)) fail(ErrorCode::BadExponent, "comparison exponent must be >= 1");

  std::unordered_map<int, int> in_b;
  for (std::size_t t = 0; t < mb.triangles.size(); ++t) in_b.emplace(mb.tri_id[t], static_cast<int>(t));
  std::vector<std::pair<int, int>> pairs;  // (triangle in a or -1, triangle in b or -1)
  for (std::size_t t = 0; t < ma.triangles.size(); ++t) {
    auto it = in_b.find(ma.tri_id[t]);
    if (it != in_b.end()) {
      pairs.push_back({static_cast<int>(t), it->second});
      in_b.erase(it);
    } else {
      pairs.push_back({static_cast<int>(t), -1});
    }
  }
  std::vector<int> rest;
  for (const auto& [id, t] : in_b) rest.push_back(t);
  std::sort(rest.begin(), rest.end());
  for (int t : rest) pairs.push_back({-1, t});

  // Degree-4 symmetric rule on the reference triangle.
  const double ga = 0.445948490915965, gb = 0.091576213509771, wa = 0.223381589678011, wb = 0.109951743655322;
  GridDifference out;
  double sv = 0, sg = 0, sj = 0;
  const double p = opt.p;
  for (auto [ta, tb] : pairs) {
    Tri A, B;
    if (ta >= 0) A = load(a, ta);
    if (tb >= 0) B = load(b, tb);
    const Tri& G = ta >= 0 ? A : B;  // geometry
    const Point c{(G.x[0].x + G.x[1].x + G.x[2].x) / 3, (G.x[0].y + G.x[1].y + G.x[2].y) / 3};
    const double area = 0.5 * std::abs(geom::cross(G.x[1] - G.x[0], G.x[2] - G.x[0]));
    if (opt.keep && !opt.keep(c)) continue;
    bool cut = false;
    for (const auto& s : opt.cut)
      if (segment_cuts_triangle(s, G.x[0], G.x[1], G.x[2])) {
        cut = true;
        break;
      }
    if (cut) {
      out.excluded_area += area;
      continue;
    }
    ++out.compared;
    // Corner values of B in A's corner order (matched by position).
    cplx vb[3] = {0, 0, 0};
    if (ta >= 0 && tb >= 0) {
      for (int k = 0; k < 3; ++k)
        for (int l = 0; l < 3; ++l)
          if (geom::dist(A.x[k], B.x[l]) <= 1e-12 * (1 + geom::norm(A.x[k]))) vb[k] = B.v[l];
    } else if (tb >= 0) {
      for (int k = 0; k < 3; ++k) vb[k] = B.v[k];
    }
    cplx va[3] = {0, 0, 0};
    if (ta >= 0)
      for (int k = 0; k < 3; ++k) va[k] = A.v[k];
    const auto gA = ta >= 0 ? scaled(opt.sigma_a, c, A.grad) : std::array<cplx, 2>{0.0, 0.0};
    const auto gB = tb >= 0 ? scaled(opt.sigma_b, c, B.grad) : std::array<cplx, 2>{0.0, 0.0};
    const double dg2 = std::norm(gA[0] - gB[0]) + std::norm(gA[1] - gB[1]);
    sg += area * std::pow(dg2, p / 2);
    for (int k = 0; k < 3; ++k)
      for (auto [q, w] : {std::pair{ga, wa}, std::pair{gb, wb}}) {
        double l[3] = {q, q, q};
        l[k] = 1 - 2 * q;
        const cplx d = l[0] * (va[0] - vb[0]) + l[1] * (va[1] - vb[1]) + l[2] * (va[2] - vb[2]);
        const double d2 = std::norm(d);
        sv += area * w * std::pow(d2, p / 2);
        sj += area * w * std::pow(d2 + dg2, p / 2);
      }
  }
  out.value = std::pow(sv, 1 / p);
  out.gradient = std::pow(sg, 1 / p);
  out.joint = std::pow(sj, 1 / p);
  return out;
}

}  // namespace mosco::exp
