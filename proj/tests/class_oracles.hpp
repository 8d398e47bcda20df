/**
 * @file class_oracles.hpp
 * @brief Brute-force sampling oracles for the class predicates.
 *
 * Curves are plain vertex lists here; nothing calls into the checker.
 */
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <vector>

#include "oracles.hpp"

namespace oracle {

struct Pt {
  Point p;
  double s;
};

inline std::vector<Pt> densify(const std::vector<Point>& pts, double h) {
  std::vector<Pt> out;
  if (pts.size() == 1) return {{pts[0], 0.0}};
  double s = 0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const Point a = pts[i], b = pts[i + 1];
    const double l = std::hypot(b.x - a.x, b.y - a.y);
    const int n = std::max(1, static_cast<int>(std::ceil(l / h)));
    for (int k = 0; k < n; ++k) out.push_back({{a.x + (b.x - a.x) * k / n, a.y + (b.y - a.y) * k / n}, s + l * k / n});
    s += l;
  }
  out.push_back({pts.back(), s});
  return out;
}

/// Sub-polyline between real vertex parameters.
inline std::vector<Point> slice(const std::vector<Point>& pl, double t0, double t1) {
  if (pl.size() == 1) return pl;
  auto at = [&](double t) {
    std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(t), pl.size() - 2);
    const double f = t - static_cast<double>(i);
    return Point{pl[i].x + f * (pl[i + 1].x - pl[i].x), pl[i].y + f * (pl[i + 1].y - pl[i].y)};
  };
  std::vector<Point> out{at(t0)};
  for (std::size_t i = 0; i < pl.size(); ++i)
    if (static_cast<double>(i) > t0 && static_cast<double>(i) < t1) out.push_back(pl[i]);
  out.push_back(at(t1));
  return out;
}

inline double d2(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

/// Largest (sampled length from p to s) / |ps| over sample pairs of one
/// curve whose samples from p to s stay in the open ball B_r(p). An
/// L-bi-Lipschitz flattening onto a line forces this to be <= L^2.
inline double max_chain_distortion(const std::vector<Point>& pts, double r, double h) {
  const auto S = densify(pts, h);
  double worst = 1.0;
  for (std::size_t i = 0; i < S.size(); ++i) {
    double len = 0.0;
    for (std::size_t k = i + 1; k < S.size(); ++k) {
      len += d2(S[k - 1].p, S[k].p);
      const double ps = d2(S[i].p, S[k].p);
      if (ps >= r) break;
      if (ps > 0) worst = std::max(worst, len / ps);
    }
  }
  return worst;
}

/// Half width of the smallest double cone holding all chord directions
/// between the given points (pi/2 if they span every direction).
inline double chord_half_width(const std::vector<Point>& P) {
  std::vector<double> a;
  for (std::size_t i = 0; i < P.size(); ++i)
    for (std::size_t j = i + 1; j < P.size(); ++j) {
      if (d2(P[i], P[j]) < 1e-14) continue;
      double t = std::atan2(P[j].y - P[i].y, P[j].x - P[i].x);
      t = std::fmod(t + 2 * std::numbers::pi, std::numbers::pi);
      a.push_back(t);
    }
  if (a.size() < 1) return 0.0;
  std::sort(a.begin(), a.end());
  double gap = a.front() + std::numbers::pi - a.back();
  for (std::size_t i = 1; i < a.size(); ++i) gap = std::max(gap, a[i] - a[i - 1]);
  return (std::numbers::pi - gap) / 2;
}

/// Worst chord half-width over balls B_r(c), c sampled every `spacing` along
/// the curves, using curve samples at spacing h.
inline double worst_ball_half_width(const std::vector<std::vector<Point>>& curves, double r, double spacing, double h) {
  std::vector<Point> all, centers;
  for (const auto& c : curves) {
    for (const Pt& q : densify(c, h)) all.push_back(q.p);
    for (const Pt& q : densify(c, spacing)) centers.push_back(q.p);
  }
  double worst = 0.0;
  for (const Point& c : centers) {
    std::vector<Point> in;
    for (const Point& q : all)
      if (d2(q, c) <= r) in.push_back(q);
    worst = std::max(worst, chord_half_width(in));
  }
  return worst;
}

/// Number of points where the circle of radius eps about p meets the segments.
inline int circle_crossings(Point p, const std::vector<std::vector<Point>>& curves, double eps) {
  std::vector<Point> hits;
  for (const auto& c : curves)
    for (std::size_t i = 0; i + 1 < c.size(); ++i) {
      const Point a = c[i], b = c[i + 1];
      const double dx = b.x - a.x, dy = b.y - a.y, fx = a.x - p.x, fy = a.y - p.y;
      const double A = dx * dx + dy * dy, B = 2 * (fx * dx + fy * dy), C = fx * fx + fy * fy - eps * eps;
      const double disc = B * B - 4 * A * C;
      if (A == 0 || disc < 0) continue;
      for (double sgn : {-1.0, 1.0}) {
        const double t = (-B + sgn * std::sqrt(disc)) / (2 * A);
        if (t < 0 || t > 1) continue;
        const Point q{a.x + t * dx, a.y + t * dy};
        bool dup = false;
        for (const Point& h : hits) dup = dup || d2(h, q) < 1e-10;
        if (!dup) hits.push_back(q);
      }
    }
  return static_cast<int>(hits.size());
}

inline double dist_to_curves(Point p, const std::vector<std::vector<Point>>& curves) {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& c : curves) {
    if (c.size() == 1) d = std::min(d, d2(p, c[0]));
    for (std::size_t i = 0; i + 1 < c.size(); ++i) d = std::min(d, seg_dist(p, c[i], c[i + 1]));
  }
  return d;
}

/// Ends of a piece (curve end points where only one branch leaves).
inline std::vector<Point> piece_ends(const std::vector<std::vector<Point>>& piece) {
  std::vector<Point> out;
  for (const auto& c : piece) {
    if (c.size() == 1) {
      out.push_back(c[0]);
      continue;
    }
    const bool closed = d2(c.front(), c.back()) == 0.0;
    if (closed) continue;
    for (const Point& e : {c.front(), c.back()})
      if (circle_crossings(e, piece, 1e-7) <= 1) out.push_back(e);
  }
  return out;
}

struct GluingSample {
  double worst_gap = std::numeric_limits<double>::infinity();  // min of d_o - omega(delta)
  Point worst_at{};
  double min_ratio = std::numeric_limits<double>::infinity();  // d_o / delta for 1e-9 < delta <= delta0
};

inline GluingSample gluing_sample(const std::vector<std::vector<std::vector<Point>>>& pieces,
                                  const std::function<double(double)>& omega, double delta0, double h) {
  GluingSample g;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    std::vector<std::vector<Point>> others;
    for (std::size_t j = 0; j < pieces.size(); ++j)
      if (j != i) others.insert(others.end(), pieces[j].begin(), pieces[j].end());
    const auto ends = piece_ends(pieces[i]);
    for (const auto& c : pieces[i])
      for (const Pt& q : densify(c, h)) {
        double delta = std::numeric_limits<double>::infinity();
        for (const Point& e : ends) delta = std::min(delta, d2(q.p, e));
        const double dout = dist_to_curves(q.p, others);
        if (dout - omega(delta) < g.worst_gap) {
          g.worst_gap = dout - omega(delta);
          g.worst_at = q.p;
        }
        if (delta > 1e-9 && delta <= delta0) g.min_ratio = std::min(g.min_ratio, dout / delta);
      }
  }
  return g;
}

}  // namespace oracle
