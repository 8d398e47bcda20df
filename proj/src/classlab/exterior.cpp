/**
 * @file exterior.cpp
 * @brief Uniform exterior connectedness by union-find on a certified grid graph.
 *
 * A grid node is usable if its distance to K is >= s; an edge between two
 * nodes at distances d1, d2 and length l keeps distance >= (d1 + d2 - l)/2
 * along its whole length, so accepted paths are certified.
 */
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "mosco/classlab/checks.hpp"
#include "mosco/core/error.hpp"
#include "mosco/geom/set_distance.hpp"

namespace mosco::classlab {

namespace {

struct DisjointSets {
  std::vector<std::int64_t> parent;
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::int64_t find(std::int64_t x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  }
  void unite(std::int64_t a, std::int64_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
  }
};

}  // namespace

std::vector<double> distance_grid(const geom::SetDistance& D, Point lo, double h, std::size_t nx, std::size_t ny,
                                  kernels::Exec ex) {
  std::vector<double> d(nx * ny);
  kernels::for_each_index(d.size(), ex, [&](std::size_t k) {
    const std::size_t i = k % nx, j = k / nx;
    d[k] = D({lo.x + h * static_cast<double>(i), lo.y + h * static_cast<double>(j)});
  });
  return d;
}

Verdict check_exterior_connectedness(const CompactScene& scene, const Modulus& gamma, const std::vector<double>& t_samples,
                                     const ExteriorOptions& opt) {
  if (scene.empty()) fail(ErrorCode::EmptyScene, "exterior connectedness of an empty scene");
  if (t_samples.empty()) fail(ErrorCode::InvalidArgument, "no t samples");
  const geom::SetDistance D(scene);
  Verdict v;
  std::size_t total_centers = 0;

  for (const double t : t_samples) {
    if (!(t > 0)) fail(ErrorCode::InvalidArgument, "t samples must be positive");
    const double s = gamma(t) * (1 - opt.tol);
    if (!(s > 0)) fail(ErrorCode::InvalidArgument, "gamma(t) must be positive");
    const double h = s / 4;
    const double margin = t + 2 * s + 2 * h;
    const Point lo = scene.box_lo() - Point{margin, margin};
    const Point hi = scene.box_hi() + Point{margin, margin};
    const auto nx = static_cast<std::size_t>(std::ceil((hi.x - lo.x) / h)) + 1;
    const auto ny = static_cast<std::size_t>(std::ceil((hi.y - lo.y) / h)) + 1;
    if (static_cast<double>(nx) * static_cast<double>(ny) > 4e7)
      fail(ErrorCode::InvalidArgument, "exterior grid too fine for t = " + std::to_string(t));
    const std::vector<double> d = distance_grid(D, lo, h, nx, ny, opt.exec);

    // Centers after the grid nodes in the disjoint-set index space.
    std::vector<Point> centers;
    std::vector<double> dc;
    const double cs = t / 2;
    const Point blo = scene.box_lo(), bhi = scene.box_hi();
    for (double y = blo.y; y <= bhi.y + 1e-12; y += cs)
      for (double x = blo.x; x <= bhi.x + 1e-12; x += cs) {
        const double dd = D({x, y});
        if (dd >= t) {
          centers.push_back({x, y});
          dc.push_back(dd);
        }
      }
    if (centers.empty()) fail(ErrorCode::NoExteriorBalls, "no ball of radius " + std::to_string(t) + " misses K");
    total_centers += centers.size();

    const std::size_t N = nx * ny;
    DisjointSets ds(N + centers.size());
    auto ok_edge = [&](double d1, double d2, double len) { return d1 >= s && d2 >= s && (d1 + d2 - len) / 2 >= s; };
    const double diag = h * std::sqrt(2.0);
    for (std::size_t j = 0; j < ny; ++j)
      for (std::size_t i = 0; i < nx; ++i) {
        const std::size_t k = j * nx + i;
        if (d[k] < s) continue;
        if (i + 1 < nx && ok_edge(d[k], d[k + 1], h)) ds.unite(static_cast<std::int64_t>(k), static_cast<std::int64_t>(k + 1));
        if (j + 1 < ny) {
          const std::size_t up = k + nx;
          if (ok_edge(d[k], d[up], h)) ds.unite(static_cast<std::int64_t>(k), static_cast<std::int64_t>(up));
          if (i + 1 < nx && ok_edge(d[k], d[up + 1], diag))
            ds.unite(static_cast<std::int64_t>(k), static_cast<std::int64_t>(up + 1));
          if (i > 0 && ok_edge(d[k], d[up - 1], diag)) ds.unite(static_cast<std::int64_t>(k), static_cast<std::int64_t>(up - 1));
        }
      }
    for (std::size_t c = 0; c < centers.size(); ++c) {
      const auto i0 = static_cast<std::int64_t>(std::floor((centers[c].x - lo.x) / h));
      const auto j0 = static_cast<std::int64_t>(std::floor((centers[c].y - lo.y) / h));
      for (std::int64_t j = j0 - 1; j <= j0 + 2; ++j)
        for (std::int64_t i = i0 - 1; i <= i0 + 2; ++i) {
          if (i < 0 || j < 0 || i >= static_cast<std::int64_t>(nx) || j >= static_cast<std::int64_t>(ny)) continue;
          const std::size_t k = static_cast<std::size_t>(j) * nx + static_cast<std::size_t>(i);
          const Point q{lo.x + h * static_cast<double>(i), lo.y + h * static_cast<double>(j)};
          if (ok_edge(dc[c], d[k], geom::dist(centers[c], q)))
            ds.unite(static_cast<std::int64_t>(N + c), static_cast<std::int64_t>(k));
        }
    }
    const std::int64_t root = ds.find(static_cast<std::int64_t>(N));
    for (std::size_t c = 1; c < centers.size(); ++c)
      if (ds.find(static_cast<std::int64_t>(N + c)) != root) {
        v.status = Status::FAIL;
        v.witnesses = {{centers[0], "EXT.disconnected", t}, {centers[c], "EXT.disconnected", t}};
        return v;
      }
  }
  v.status = Status::PASS;
  v.witnesses = {{scene.box_center, "EXT.connected", static_cast<double>(total_centers)}};
  return v;
}

}  // namespace mosco::classlab
