#include "mosco/mesh/crackmesh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <unordered_map>

#include "background.hpp"
#include "mosco/core/error.hpp"
#include "mosco/geom/measure.hpp"

namespace mosco::mesh {

using geom::dist;
using geom::Segment;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::uint64_t key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | static_cast<std::uint32_t>(b);
}

struct Edge {
  int u, v;
  int t0 = -1, t1 = -1;  // kept triangles (t0 has u->v counter-clockwise when both exist)
};

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : p_(n) { std::iota(p_.begin(), p_.end(), 0); }
  int find(int x) {
    while (p_[static_cast<std::size_t>(x)] != x) x = p_[static_cast<std::size_t>(x)] = p_[static_cast<std::size_t>(p_[static_cast<std::size_t>(x)])];
    return x;
  }
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a != b) p_[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
  }

 private:
  std::vector<int> p_;
};

struct Graph {
  std::vector<std::vector<std::pair<int, int>>> nbr;  // (vertex, edge)
};

// Closest points of two disjoint segments: one of them is an endpoint projection.
std::pair<Point, double> closest_between(const Segment& s, const Segment& t) {
  std::pair<Point, double> best{s.a, kInf};
  auto consider = [&](Point p, const Segment& other) {
    const double d = geom::point_segment_distance(p, other);
    if (d < best.second) best = {p, d};
  };
  consider(s.a, t);
  consider(s.b, t);
  consider(t.a, s);
  consider(t.b, s);
  return best;
}

std::vector<Segment> segments_of(const geom::Polyline& pl) {
  std::vector<Segment> out;
  if (pl.is_point()) out.push_back({pl.pts[0], pl.pts[0]});
  for (std::size_t i = 0; i + 1 < pl.pts.size(); ++i) out.push_back(pl.segment(i));
  return out;
}

class Builder {
 public:
  Builder(const CompactScene& scene, double h, const MeshOptions& opt) : scene_(scene), opt_(opt) {
    if (!(h > 0) || !std::isfinite(h)) fail(ErrorCode::InvalidArgument, "mesh spacing must be positive");
    const bool disk = opt.disk_radius > 0;
    const double R = disk ? opt.disk_radius : scene.box_radius;
    const Point c = disk ? opt.disk_center : scene.box_center;
    const double cells = 2 * R / h;
    if (cells > 8192) fail(ErrorCode::InvalidArgument, "mesh spacing too small for the domain");
    n_ = std::max(1, static_cast<int>(std::ceil(cells - 1e-9)));
    m_.h = 2 * R / n_;
    if (disk) {
      m_.disk_center = c;
      m_.disk_radius = R;
    }
    bg_ = detail::structured_grid({c.x - R, c.y - R}, n_, m_.h);
    detail::grade(bg_, opt);
    m_.background_size = bg_.tri.size();
  }

  CrackMesh run() {
    mask();
    build_edges();
    snap();
    assign_dofs();
    collect_edges();
    certify();
    return std::move(m_);
  }

 private:
  Point centroid(const std::array<int, 3>& T) const {
    const Point a = bg_.v[static_cast<std::size_t>(T[0])], b = bg_.v[static_cast<std::size_t>(T[1])],
                c = bg_.v[static_cast<std::size_t>(T[2])];
    return {(a.x + b.x + c.x) / 3, (a.y + b.y + c.y) / 3};
  }

  // 0 kept, 1 outside the disk, 2 inside a solid.
  void mask() {
    removed_.assign(bg_.tri.size(), 0);
    std::vector<int> vmap(bg_.v.size(), -1);
    for (std::size_t t = 0; t < bg_.tri.size(); ++t) {
      const Point g = centroid(bg_.tri[t]);
      if (opt_.disk_radius > 0 && dist(g, opt_.disk_center) >= opt_.disk_radius) {
        removed_[t] = 1;
        continue;
      }
      for (const auto& P : scene_.solids)
        if (geom::point_in_polygon(g, P)) removed_[t] = 2;
      if (removed_[t]) continue;
      for (int k = 0; k < 3; ++k) vmap[static_cast<std::size_t>(bg_.tri[t][k])] = 0;
    }
    for (std::size_t i = 0; i < bg_.v.size(); ++i)
      if (vmap[i] == 0) {
        vmap[i] = static_cast<int>(m_.vertices.size());
        m_.vertices.push_back(bg_.v[i]);
      }
    if (m_.vertices.empty()) fail(ErrorCode::MeshFailure, "no triangles left after masking");
    for (std::size_t t = 0; t < bg_.tri.size(); ++t) {
      if (removed_[t]) continue;
      const auto& T = bg_.tri[t];
      m_.triangles.push_back({vmap[static_cast<std::size_t>(T[0])], vmap[static_cast<std::size_t>(T[1])],
                              vmap[static_cast<std::size_t>(T[2])]});
      m_.tri_id.push_back(static_cast<int>(t));
    }
    // Edges between a kept triangle and a removed one: remember why the neighbour went away.
    std::unordered_map<std::uint64_t, std::array<int, 2>> bg_edges;
    for (std::size_t t = 0; t < bg_.tri.size(); ++t)
      for (int k = 0; k < 3; ++k) {
        auto& s = bg_edges.try_emplace(key(bg_.tri[t][k], bg_.tri[t][(k + 1) % 3]), std::array<int, 2>{-1, -1}).first->second;
        (s[0] < 0 ? s[0] : s[1]) = static_cast<int>(t);
      }
    for (const auto& [k, s] : bg_edges) {
      if (s[1] < 0) continue;
      const int r0 = removed_[static_cast<std::size_t>(s[0])], r1 = removed_[static_cast<std::size_t>(s[1])];
      if ((r0 == 0) == (r1 == 0)) continue;
      const int gone = r0 ? r0 : r1;
      const int a = vmap[static_cast<std::size_t>(k >> 32)], b = vmap[static_cast<std::size_t>(k & 0xffffffffu)];
      if (gone == 2) solid_edges_.insert({key(a, b), 1});
    }
  }

  void build_edges() {
    for (std::size_t t = 0; t < m_.triangles.size(); ++t) {
      const auto& T = m_.triangles[t];
      for (int k = 0; k < 3; ++k) {
        const int u = T[k], v = T[(k + 1) % 3];
        auto [it, fresh] = edge_of_.try_emplace(key(u, v), static_cast<int>(edges_.size()));
        if (fresh) {
          edges_.push_back({u, v, static_cast<int>(t), -1});
        } else {
          edges_[static_cast<std::size_t>(it->second)].t1 = static_cast<int>(t);
        }
      }
    }
    graph_.nbr.assign(m_.vertices.size(), {});
    for (std::size_t e = 0; e < edges_.size(); ++e) {
      graph_.nbr[static_cast<std::size_t>(edges_[e].u)].push_back({edges_[e].v, static_cast<int>(e)});
      graph_.nbr[static_cast<std::size_t>(edges_[e].v)].push_back({edges_[e].u, static_cast<int>(e)});
    }
    crack_owner_.assign(edges_.size(), -1);
    crack_dir_.assign(edges_.size(), 0);
    vertex_owner_.assign(m_.vertices.size(), -1);
  }

  int nearest_vertex(Point p) const {
    int best = 0;
    double bd = kInf;
    for (std::size_t i = 0; i < m_.vertices.size(); ++i) {
      const double d = dist(p, m_.vertices[i]);
      if (d < bd) {
        bd = d;
        best = static_cast<int>(i);
      }
    }
    return best;
  }

  double local_h(int v) const {
    double h = 0;
    for (const auto& [w, e] : graph_.nbr[static_cast<std::size_t>(v)]) h = std::max(h, dist(m_.vertices[static_cast<std::size_t>(v)], m_.vertices[static_cast<std::size_t>(w)]));
    return h;
  }

  // Shortest edge path from a to b, biased towards the segment s.
  std::vector<int> path(int a, int b, const Segment& s) {
    dist_.resize(m_.vertices.size(), kInf);
    prev_.resize(m_.vertices.size(), -1);
    std::vector<int> touched{a};
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist_[static_cast<std::size_t>(a)] = 0;
    pq.push({0.0, a});
    while (!pq.empty()) {
      const auto [d, u] = pq.top();
      pq.pop();
      if (d > dist_[static_cast<std::size_t>(u)]) continue;
      if (u == b) break;
      for (const auto& [w, e] : graph_.nbr[static_cast<std::size_t>(u)]) {
        const Point pu = m_.vertices[static_cast<std::size_t>(u)], pw = m_.vertices[static_cast<std::size_t>(w)];
        const double c = d + dist(pu, pw) + 4 * geom::point_segment_distance(geom::lerp(pu, pw, 0.5), s);
        if (c < dist_[static_cast<std::size_t>(w)]) {
          if (dist_[static_cast<std::size_t>(w)] == kInf) touched.push_back(w);
          dist_[static_cast<std::size_t>(w)] = c;
          prev_[static_cast<std::size_t>(w)] = u;
          pq.push({c, w});
        }
      }
    }
    if (dist_[static_cast<std::size_t>(b)] == kInf) fail(ErrorCode::MeshFailure, "crack endpoints are not connected in the mesh");
    std::vector<int> out;
    for (int x = b; x != a; x = prev_[static_cast<std::size_t>(x)]) out.push_back(x);
    out.push_back(a);
    std::reverse(out.begin(), out.end());
    for (int x : touched) {
      dist_[static_cast<std::size_t>(x)] = kInf;
      prev_[static_cast<std::size_t>(x)] = -1;
    }
    return out;
  }

  bool touching(std::size_t i, std::size_t j) const {
    for (const Segment& s : segments_of(scene_.cracks[i]))
      for (const Segment& t : segments_of(scene_.cracks[j]))
        if (geom::segment_segment_distance(s, t) == 0.0) return true;
    return false;
  }

  void separation_guard() {
    const auto& C = scene_.cracks;
    for (std::size_t i = 0; i < C.size(); ++i)
      for (std::size_t j = i + 1; j < C.size(); ++j) {
        std::pair<Point, double> best{{}, kInf};
        for (const Segment& s : segments_of(C[i]))
          for (const Segment& t : segments_of(C[j])) {
            const double d = geom::segment_segment_distance(s, t);
            if (d == 0.0) {
              best.second = 0.0;
              break;
            }
            if (d < best.second) best = closest_between(s, t);
          }
        if (best.second == 0.0) continue;
        const double hl = local_h(nearest_vertex(best.first));
        if (best.second < 2 * hl)
          fail(ErrorCode::SceneTooFine, "cracks " + std::to_string(i) + " and " + std::to_string(j) + " are " +
                                            std::to_string(best.second) + " apart, below twice the local spacing " +
                                            std::to_string(hl));
      }
  }

  void snap() {
    separation_guard();
    for (std::size_t ci = 0; ci < scene_.cracks.size(); ++ci) {
      const auto& pl = scene_.cracks[ci];
      std::vector<int> way;
      for (const Point& p : pl.pts) way.push_back(nearest_vertex(p));
      std::vector<int> route{way[0]};
      // Cracks already on mesh edges: the snap error is the rounding-level deviation.
      bool exact = true;
      double dev = 0.0;
      for (std::size_t k = 0; k < way.size(); ++k) dev = std::max(dev, dist(m_.vertices[static_cast<std::size_t>(way[k])], pl.pts[k]));
      for (std::size_t k = 0; k + 1 < way.size(); ++k) {
        if (way[k + 1] == route.back()) continue;
        const auto seg = path(route.back(), way[k + 1], pl.segment(k));
        for (int v : seg) dev = std::max(dev, geom::point_segment_distance(m_.vertices[static_cast<std::size_t>(v)], pl.segment(k)));
        route.insert(route.end(), seg.begin() + 1, seg.end());
      }
      exact = dev <= 1e-12;
      all_exact_ = all_exact_ && exact;
      exact_dev_ = std::max(exact_dev_, dev);
      geom::Polyline out;
      for (int v : route) {
        out.pts.push_back(m_.vertices[static_cast<std::size_t>(v)]);
        int& own = vertex_owner_[static_cast<std::size_t>(v)];
        if (own >= 0 && own != static_cast<int>(ci) && !touching(static_cast<std::size_t>(own), ci))
          fail(ErrorCode::SceneTooFine, "cracks " + std::to_string(own) + " and " + std::to_string(ci) +
                                            " snap onto the same mesh vertex");
        own = static_cast<int>(ci);
      }
      for (std::size_t k = 0; k + 1 < route.size(); ++k) {
        const int e = edge_of_.at(key(route[k], route[k + 1]));
        if (crack_owner_[static_cast<std::size_t>(e)] >= 0) continue;
        crack_owner_[static_cast<std::size_t>(e)] = static_cast<int>(ci);
        crack_dir_[static_cast<std::size_t>(e)] = edges_[static_cast<std::size_t>(e)].u == route[k] ? 1 : -1;
      }
      m_.snapped.cracks.push_back(std::move(out));
    }
    m_.snapped.box_center = scene_.box_center;
    m_.snapped.box_radius = scene_.box_radius;
    m_.snapped.solids = scene_.solids;
    m_.snapped.label = scene_.label;
  }

  bool is_cut(std::size_t e) const { return crack_owner_[e] >= 0 && edges_[e].t1 >= 0; }

  void assign_dofs() {
    const std::size_t nt = m_.triangles.size();
    UnionFind uf(3 * nt);
    auto corner = [&](int t, int v) {
      const auto& T = m_.triangles[static_cast<std::size_t>(t)];
      return 3 * t + static_cast<int>(std::find(T.begin(), T.end(), v) - T.begin());
    };
    for (std::size_t e = 0; e < edges_.size(); ++e) {
      const Edge& E = edges_[e];
      if (E.t1 < 0 || is_cut(e)) continue;
      uf.unite(corner(E.t0, E.u), corner(E.t1, E.u));
      uf.unite(corner(E.t0, E.v), corner(E.t1, E.v));
    }
    std::vector<std::vector<int>> corners(m_.vertices.size());
    for (std::size_t t = 0; t < nt; ++t)
      for (int k = 0; k < 3; ++k) corners[static_cast<std::size_t>(m_.triangles[t][k])].push_back(static_cast<int>(3 * t) + k);
    std::vector<int> dof_of_root(3 * nt, -1);
    m_.tri_dofs.assign(nt, {-1, -1, -1});
    m_.dof_map.assign(m_.vertices.size(), {});
    for (std::size_t v = 0; v < corners.size(); ++v)
      for (int c : corners[v]) {
        int& d = dof_of_root[static_cast<std::size_t>(uf.find(c))];
        if (d < 0) {
          d = static_cast<int>(m_.dof_vertex.size());
          m_.dof_vertex.push_back(static_cast<int>(v));
          m_.dof_map[v].push_back(d);
        }
        m_.tri_dofs[static_cast<std::size_t>(c / 3)][static_cast<std::size_t>(c % 3)] = d;
      }
  }

  int dof_at(int t, int v) const {
    const auto& T = m_.triangles[static_cast<std::size_t>(t)];
    return m_.tri_dofs[static_cast<std::size_t>(t)][static_cast<std::size_t>(std::find(T.begin(), T.end(), v) - T.begin())];
  }

  void collect_edges() {
    for (std::size_t e = 0; e < edges_.size(); ++e) {
      const Edge& E = edges_[e];
      if (E.t1 < 0) {
        // t0 lists (u, v) counter-clockwise by construction.
        BoundaryEdge b;
        b.v0 = E.u;
        b.v1 = E.v;
        b.tri = E.t0;
        b.d0 = dof_at(E.t0, E.u);
        b.d1 = dof_at(E.t0, E.v);
        b.tag = solid_edges_.count(key(E.u, E.v)) ? EdgeTag::SOLID : EdgeTag::OUTER;
        m_.boundary_edges.push_back(b);
        continue;
      }
      if (!is_cut(e)) continue;
      CrackEdge c;
      const bool fwd = crack_dir_[e] > 0;
      c.v0 = fwd ? E.u : E.v;
      c.v1 = fwd ? E.v : E.u;
      // t0 sees u->v counter-clockwise, i.e. lies to the left of u->v.
      c.ta = fwd ? E.t0 : E.t1;
      c.tb = fwd ? E.t1 : E.t0;
      c.a0 = dof_at(c.ta, c.v0);
      c.a1 = dof_at(c.ta, c.v1);
      c.b0 = dof_at(c.tb, c.v0);
      c.b1 = dof_at(c.tb, c.v1);
      c.polyline = crack_owner_[e];
      m_.crack_edges.push_back(c);
    }
  }

  void certify() {
    double err = all_exact_ ? exact_dev_ : 0.0;
    if (!scene_.cracks.empty() && !all_exact_) {
      CompactScene req = scene_, got = m_.snapped;
      req.solids.clear();
      got.solids.clear();
      err = geom::hausdorff_distance(req, got, m_.h / 64).hi();
    }
    // Staircase solids: every kept or removed triangle straddling a solid edge has diameter <= sqrt(2) h.
    if (!scene_.solids.empty()) err = std::max(err, std::sqrt(2.0) * m_.h);
    m_.snap_error = err;
  }

  const CompactScene& scene_;
  const MeshOptions& opt_;
  int n_ = 0;
  detail::Background bg_;
  CrackMesh m_;
  std::vector<int> removed_;
  std::unordered_map<std::uint64_t, int> solid_edges_;
  std::vector<Edge> edges_;
  std::unordered_map<std::uint64_t, int> edge_of_;
  Graph graph_;
  std::vector<int> crack_owner_, crack_dir_, vertex_owner_;
  bool all_exact_ = true;  // every crack lies on mesh edges already
  double exact_dev_ = 0.0;
  std::vector<double> dist_;
  std::vector<int> prev_;
};

}  // namespace

double CrackMesh::area(int t) const {
  const auto& T = triangles[static_cast<std::size_t>(t)];
  const Point a = vertices[static_cast<std::size_t>(T[0])], b = vertices[static_cast<std::size_t>(T[1])],
              c = vertices[static_cast<std::size_t>(T[2])];
  return 0.5 * geom::cross(b - a, c - a);
}

CrackMesh build_cracked_mesh(const CompactScene& scene, double h, const MeshOptions& opt) {
  return Builder(scene, h, opt).run();
}

SidePair crack_side_dofs(const CrackMesh& m, int id) {
  if (id < 0 || static_cast<std::size_t>(id) >= m.crack_edges.size())
    fail(ErrorCode::NotACrackEdge, "edge " + std::to_string(id) + " is not a crack edge");
  const CrackEdge& c = m.crack_edges[static_cast<std::size_t>(id)];
  return {{c.a0, c.a1}, {c.b0, c.b1}};
}

int find_crack_edge(const CrackMesh& m, int v0, int v1) {
  for (std::size_t i = 0; i < m.crack_edges.size(); ++i) {
    const CrackEdge& c = m.crack_edges[i];
    if ((c.v0 == v0 && c.v1 == v1) || (c.v0 == v1 && c.v1 == v0)) return static_cast<int>(i);
  }
  return -1;
}

MeshQuality mesh_quality(const CrackMesh& m) {
  MeshQuality q;
  q.min_angle = 180.0;
  UnionFind uf(m.triangles.size());
  std::unordered_map<std::uint64_t, int> first;
  std::unordered_map<std::uint64_t, char> cut;
  for (const CrackEdge& c : m.crack_edges) cut[key(c.v0, c.v1)] = 1;
  for (std::size_t t = 0; t < m.triangles.size(); ++t) {
    const auto& T = m.triangles[t];
    Point p[3];
    for (int k = 0; k < 3; ++k) p[k] = m.vertices[static_cast<std::size_t>(T[k])];
    double len[3], longest = 0, per = 0;
    for (int k = 0; k < 3; ++k) {
      len[k] = dist(p[k], p[(k + 1) % 3]);
      longest = std::max(longest, len[k]);
      per += len[k];
    }
    const double A = m.area(static_cast<int>(t));
    q.area_total += A;
    for (int k = 0; k < 3; ++k) {
      const Point u = p[(k + 1) % 3] - p[k], w = p[(k + 2) % 3] - p[k];
      const double ang = std::atan2(std::abs(geom::cross(u, w)), geom::dot(u, w)) * 180.0 / M_PI;
      q.min_angle = std::min(q.min_angle, ang);
    }
    const double inradius = 2 * A / per;
    q.max_aspect = std::max(q.max_aspect, longest / (2 * std::sqrt(3.0) * inradius));
    for (int k = 0; k < 3; ++k) {
      const std::uint64_t e = key(T[k], T[(k + 1) % 3]);
      if (cut.count(e)) continue;
      auto [it, fresh] = first.try_emplace(e, static_cast<int>(t));
      if (!fresh) uf.unite(it->second, static_cast<int>(t));
    }
  }
  for (std::size_t t = 0; t < m.triangles.size(); ++t)
    if (uf.find(static_cast<int>(t)) == static_cast<int>(t)) ++q.component_count;
  return q;
}

}  // namespace mosco::mesh
