#include <algorithm>
#include <cmath>
#include <map>

#include "mosco/core/error.hpp"
#include "mosco/geom/measure.hpp"

namespace mosco::geom {

namespace {

struct Raster {
  double x0, y0, h;
  int n;
};

// Columns whose open pixel interior meets segment s within row j.
void mark_row(const Raster& R, const Segment& s, int j, std::vector<unsigned char>& mixed) {
  const double ylo = R.y0 + j * R.h, yhi = ylo + R.h;
  Point a = s.a, b = s.b;
  if (a.y > b.y) std::swap(a, b);
  double xa, xb;
  if (b.y - a.y <= 1e-15 * R.h) {
    if (!(a.y > ylo && a.y < yhi)) return;
    xa = std::min(a.x, b.x);
    xb = std::max(a.x, b.x);
  } else {
    const double t0 = std::clamp((ylo - a.y) / (b.y - a.y), 0.0, 1.0);
    const double t1 = std::clamp((yhi - a.y) / (b.y - a.y), 0.0, 1.0);
    if (t1 <= t0) return;
    const double xs = a.x + t0 * (b.x - a.x), xe = a.x + t1 * (b.x - a.x);
    xa = std::min(xs, xe);
    xb = std::max(xs, xe);
  }
  const double ua = (xa - R.x0) / R.h, ub = (xb - R.x0) / R.h;
  int c0, c1;
  if (ub - ua <= 1e-12) {
    const double fr = ua - std::floor(ua);
    if (fr <= 1e-12 || fr >= 1 - 1e-12) return;  // on a pixel boundary line
    c0 = c1 = static_cast<int>(std::floor(ua));
  } else {
    c0 = static_cast<int>(std::floor(ua));
    c1 = static_cast<int>(std::ceil(ub)) - 1;
  }
  c0 = std::max(c0, 0);
  c1 = std::min(c1, R.n - 1);
  for (int c = c0; c <= c1; ++c) mixed[c] = 1;
}

// inside[c] = pixel center of row j lies in the union of the solids.
void fill_row(const Raster& R, const std::vector<std::vector<Point>>& solids, int j, std::vector<unsigned char>& inside,
              std::vector<double>& xs) {
  const double yc = R.y0 + (j + 0.5) * R.h;
  for (const auto& P : solids) {
    xs.clear();
    for (std::size_t i = 0; i < P.size(); ++i) {
      const Point a = P[i], b = P[(i + 1) % P.size()];
      if ((a.y > yc) != (b.y > yc)) xs.push_back(a.x + (yc - a.y) * (b.x - a.x) / (b.y - a.y));
    }
    std::sort(xs.begin(), xs.end());
    for (std::size_t k = 0; k + 1 < xs.size(); k += 2) {
      // centers x0 + (c + 0.5) h in (xs[k], xs[k+1])
      const int c0 = std::max(0, static_cast<int>(std::ceil((xs[k] - R.x0) / R.h - 0.5)));
      const int c1 = std::min(R.n - 1, static_cast<int>(std::floor((xs[k + 1] - R.x0) / R.h - 0.5)));
      for (int c = c0; c <= c1; ++c) inside[c] = 1;
    }
  }
}

std::vector<Segment> solid_edges(const CompactScene& s) {
  std::vector<Segment> e;
  for (const auto& P : s.solids)
    for (std::size_t i = 0; i < P.size(); ++i) e.push_back({P[i], P[(i + 1) % P.size()]});
  return e;
}

}  // namespace

CertifiedScalar symmetric_difference_area(const CompactScene& D1, const CompactScene& D2, double resolution,
                                          kernels::Exec ex) {
  if (!(resolution > 0)) fail(ErrorCode::InvalidArgument, "resolution must be positive");
  if (D1.box_radius != D2.box_radius || !(D1.box_center == D2.box_center))
    fail(ErrorCode::InvalidArgument, "symmetric_difference_area needs identical boxes");
  if (D1.solids == D2.solids) return {0.0, 0.0};
  const double side = 2 * D1.box_radius;
  const double nn = std::ceil(side / resolution - 1e-9);
  if (nn > 2e6) fail(ErrorCode::InvalidArgument, "resolution too fine for pixel counting");
  Raster R{D1.box_lo().x, D1.box_lo().y, side / nn, static_cast<int>(nn)};

  const std::vector<Segment> e1 = solid_edges(D1), e2 = solid_edges(D2);
  std::vector<long long> xor_count(R.n, 0), mixed_count(R.n, 0);
  kernels::for_each_index(static_cast<std::size_t>(R.n), ex, [&](std::size_t jj) {
    const int j = static_cast<int>(jj);
    const double ylo = R.y0 + j * R.h, yhi = ylo + R.h;
    std::vector<unsigned char> m1(R.n, 0), m2(R.n, 0), in1(R.n, 0), in2(R.n, 0);
    std::vector<double> xs;
    for (const Segment& s : e1)
      if (std::max(s.a.y, s.b.y) >= ylo && std::min(s.a.y, s.b.y) <= yhi) mark_row(R, s, j, m1);
    for (const Segment& s : e2)
      if (std::max(s.a.y, s.b.y) >= ylo && std::min(s.a.y, s.b.y) <= yhi) mark_row(R, s, j, m2);
    fill_row(R, D1.solids, j, in1, xs);
    fill_row(R, D2.solids, j, in2, xs);
    long long x = 0, m = 0;
    for (int c = 0; c < R.n; ++c) {
      if (m1[c] || m2[c])
        ++m;
      else if (in1[c] != in2[c])
        ++x;
    }
    xor_count[jj] = x;
    mixed_count[jj] = m;
  });
  long long X = 0, M = 0;
  for (int j = 0; j < R.n; ++j) {
    X += xor_count[j];
    M += mixed_count[j];
  }
  const double px = R.h * R.h;
  return {(static_cast<double>(X) + 0.5 * static_cast<double>(M)) * px, 0.5 * static_cast<double>(M) * px};
}

double length_measure(const CompactScene& K) {
  double total = 0.0;
  for (const auto& P : K.solids) total += perimeter(P, true);
  // Group crack segments by supporting line, then merge parameter intervals.
  struct Key {
    long long angle, offset;  // quantized to 1e-11
    bool operator==(const Key&) const = default;
  };
  struct Piece {
    Key key;
    double s0, s1;
  };
  std::vector<Piece> pieces;
  for (const Segment& s : K.crack_segments()) {
    const double len = s.length();
    if (len == 0.0) continue;
    Point d = (1.0 / len) * (s.b - s.a);
    if (d.y < 0 || (d.y == 0 && d.x < 0)) d = -1.0 * d;
    double ang = std::atan2(d.y, d.x);
    if (ang >= M_PI - 1e-12) {
      ang = 0.0;
      d = {1.0, 0.0};
    }
    const double off = cross(d, s.a);
    double u0 = dot(s.a, d), u1 = dot(s.b, d);
    if (u0 > u1) std::swap(u0, u1);
    pieces.push_back({{std::llround(ang * 1e11), std::llround(off * 1e11)}, u0, u1});
  }
  std::sort(pieces.begin(), pieces.end(), [](const Piece& a, const Piece& b) {
    if (a.key.angle != b.key.angle) return a.key.angle < b.key.angle;
    if (a.key.offset != b.key.offset) return a.key.offset < b.key.offset;
    return a.s0 < b.s0;
  });
  std::size_t i = 0;
  while (i < pieces.size()) {
    std::size_t j = i + 1;
    while (j < pieces.size() && pieces[j].key == pieces[i].key) ++j;
    std::vector<std::pair<double, double>> iv;
    for (std::size_t k = i; k < j; ++k) iv.push_back({pieces[k].s0, pieces[k].s1});
    std::sort(iv.begin(), iv.end());
    double cs = iv[0].first, ce = iv[0].second;
    for (std::size_t k = 1; k < iv.size(); ++k) {
      if (iv[k].first <= ce) {
        ce = std::max(ce, iv[k].second);
      } else {
        total += ce - cs;
        cs = iv[k].first;
        ce = iv[k].second;
      }
    }
    total += ce - cs;
    i = j;
  }
  return total;
}

}  // namespace mosco::geom
