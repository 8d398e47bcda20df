#include "background.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>

#include "mosco/core/error.hpp"

namespace mosco::mesh::detail {

Background structured_grid(Point lo, int n, double h) {
  Background b;
  const int m = n + 1;
  b.v.reserve(static_cast<std::size_t>(m) * m);
  for (int j = 0; j <= n; ++j)
    for (int i = 0; i <= n; ++i) b.v.push_back({lo.x + h * i, lo.y + h * j});
  auto id = [m](int i, int j) { return j * m + i; };
  b.tri.reserve(2 * static_cast<std::size_t>(n) * n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      const int v00 = id(i, j), v10 = id(i + 1, j), v01 = id(i, j + 1), v11 = id(i + 1, j + 1);
      if ((i + j) % 2 == 0) {  // diagonal v00-v11
        b.tri.push_back({v10, v11, v00});
        b.tri.push_back({v01, v00, v11});
      } else {  // diagonal v10-v01
        b.tri.push_back({v00, v10, v01});
        b.tri.push_back({v11, v01, v10});
      }
    }
  return b;
}

namespace {

std::uint64_t key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}

class Bisector {
 public:
  explicit Bisector(Background& b) : b_(b), alive_(b.tri.size(), 1) {
    for (std::size_t t = 0; t < b.tri.size(); ++t) attach(static_cast<int>(t));
  }

  bool alive(int t) const { return alive_[static_cast<std::size_t>(t)] != 0; }

  void refine(int t) {
    int n = across_ref(t);
    if (n >= 0 && key(b_.tri[n][1], b_.tri[n][2]) != ref_key(t)) {
      refine(n);
      n = across_ref(t);
    }
    const auto [p, l, r] = b_.tri[static_cast<std::size_t>(t)];
    const int m = static_cast<int>(b_.v.size());
    b_.v.push_back(geom::lerp(b_.v[static_cast<std::size_t>(l)], b_.v[static_cast<std::size_t>(r)], 0.5));
    split(t, m);
    if (n >= 0) split(n, m);
  }

  void compact() {
    std::vector<std::array<int, 3>> out;
    for (std::size_t t = 0; t < b_.tri.size(); ++t)
      if (alive_[t]) out.push_back(b_.tri[t]);
    b_.tri = std::move(out);
  }

 private:
  std::uint64_t ref_key(int t) const { return key(b_.tri[static_cast<std::size_t>(t)][1], b_.tri[static_cast<std::size_t>(t)][2]); }

  int across_ref(int t) const {
    const auto& s = adj_.at(ref_key(t));
    return s[0] == t ? s[1] : s[0];
  }

  void attach(int t) {
    const auto& T = b_.tri[static_cast<std::size_t>(t)];
    for (int k = 0; k < 3; ++k) {
      auto it = adj_.try_emplace(key(T[k], T[(k + 1) % 3]), std::array<int, 2>{-1, -1}).first;
      (it->second[0] < 0 ? it->second[0] : it->second[1]) = t;
    }
  }

  void detach(int t) {
    const auto& T = b_.tri[static_cast<std::size_t>(t)];
    for (int k = 0; k < 3; ++k) {
      auto it = adj_.find(key(T[k], T[(k + 1) % 3]));
      auto& s = it->second;
      if (s[0] == t) s[0] = s[1];
      s[1] = -1;
      if (s[0] < 0) adj_.erase(it);
    }
  }

  // (p, l, r) -> (m, p, l) and (m, r, p), both counter-clockwise.
  void split(int t, int m) {
    const auto [p, l, r] = b_.tri[static_cast<std::size_t>(t)];
    detach(t);
    alive_[static_cast<std::size_t>(t)] = 0;
    for (const std::array<int, 3>& c : {std::array<int, 3>{m, p, l}, std::array<int, 3>{m, r, p}}) {
      b_.tri.push_back(c);
      alive_.push_back(1);
      attach(static_cast<int>(b_.tri.size() - 1));
    }
  }

  Background& b_;
  std::vector<char> alive_;
  std::unordered_map<std::uint64_t, std::array<int, 2>> adj_;
};

}  // namespace

void grade(Background& b, const MeshOptions& opt) {
  if (opt.refine_points.empty()) return;
  if (!(opt.refine_hmin > 0) || !(opt.refine_grade > 0))
    fail(ErrorCode::InvalidArgument, "grading needs refine_hmin > 0 and refine_grade > 0");
  Bisector bis(b);
  auto too_big = [&](int t) {
    const auto& T = b.tri[static_cast<std::size_t>(t)];
    const Point p = b.v[static_cast<std::size_t>(T[0])], l = b.v[static_cast<std::size_t>(T[1])],
                r = b.v[static_cast<std::size_t>(T[2])];
    const double leg = geom::dist(p, l);
    const Point c{(p.x + l.x + r.x) / 3, (p.y + l.y + r.y) / 3};
    double d = std::numeric_limits<double>::infinity();
    for (const Point& q : opt.refine_points) d = std::min(d, geom::dist(q, c));
    d = std::max(0.0, d - geom::dist(l, r));
    return leg > std::max(opt.refine_hmin, opt.refine_grade * d) * (1 + 1e-9);
  };
  for (bool changed = true; changed;) {
    changed = false;
    const std::size_t n = b.tri.size();
    for (std::size_t t = 0; t < n; ++t) {
      if (!bis.alive(static_cast<int>(t)) || !too_big(static_cast<int>(t))) continue;
      bis.refine(static_cast<int>(t));
      changed = true;
    }
  }
  bis.compact();
}

}  // namespace mosco::mesh::detail
