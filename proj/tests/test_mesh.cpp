#include <doctest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "mesh_oracles.hpp"
#include "mosco/core/error.hpp"
#include "mosco/exp/fixtures.hpp"
#include "mosco/mesh/crackmesh.hpp"

using namespace mosco;
using namespace mosco::mesh;
using std::numbers::pi;

namespace {

CompactScene scene(std::vector<std::vector<Point>> cracks, double R = 0.5, Point c = {0.5, 0.5},
                   std::vector<std::vector<Point>> solids = {}) {
  geom::SceneSpec s;
  s.box_radius = R;
  s.box_center = c;
  s.cracks = std::move(cracks);
  s.solids = std::move(solids);
  return geom::build_compact_set(s);
}

int vertex_at(const CrackMesh& m, Point p) {
  for (std::size_t i = 0; i < m.vertices.size(); ++i)
    if (geom::dist(m.vertices[i], p) < 1e-12) return static_cast<int>(i);
  return -1;
}

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::InvalidArgument;
}

// DOF count and component count re-derived from the raw triangles.
void check_against_oracle(const CrackMesh& m) {
  const auto fans = oracle::fan_components(m.vertices, m.triangles, m.snapped);
  int total = 0;
  for (std::size_t v = 0; v < fans.size(); ++v) {
    CHECK(static_cast<int>(m.dof_map[v].size()) == fans[v]);
    total += fans[v];
  }
  CHECK(m.ndofs() == total);
  CHECK(mesh_quality(m).component_count == oracle::triangle_components(m.vertices, m.triangles, m.snapped));
}

}  // namespace

TEST_CASE("empty scene on a 2x2 grid") {
  const CrackMesh m = build_cracked_mesh(scene({}), 0.5);
  CHECK(m.vertices.size() == 9);
  CHECK(m.triangles.size() == 8);
  CHECK(m.ndofs() == 9);
  CHECK(m.crack_edges.empty());
  CHECK(m.boundary_edges.size() == 8);
  CHECK(m.snap_error == 0.0);
  const MeshQuality q = mesh_quality(m);
  CHECK(q.min_angle == doctest::Approx(45.0).epsilon(1e-12));
  CHECK(q.area_total == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(q.component_count == 1);
}

TEST_CASE("single interior crack duplicates the middle vertex only") {
  const CrackMesh m = build_cracked_mesh(scene({{{0.25, 0.5}, {0.75, 0.5}}}), 0.25);
  CHECK(m.vertices.size() == 25);
  CHECK(m.ndofs() == 26);
  const int mid = vertex_at(m, {0.5, 0.5}), t0 = vertex_at(m, {0.25, 0.5}), t1 = vertex_at(m, {0.75, 0.5});
  CHECK(m.dof_map[static_cast<std::size_t>(mid)].size() == 2);
  CHECK(m.dof_map[static_cast<std::size_t>(t0)].size() == 1);
  CHECK(m.dof_map[static_cast<std::size_t>(t1)].size() == 1);
  CHECK(m.snap_error == 0.0);
  REQUIRE(m.crack_edges.size() == 2);
  check_against_oracle(m);

  for (std::size_t id = 0; id < m.crack_edges.size(); ++id) {
    const SidePair sp = crack_side_dofs(m, static_cast<int>(id));
    const CrackEdge& c = m.crack_edges[id];
    const int k = c.v0 == mid ? 0 : 1;  // slot of the middle vertex
    CHECK(sp.side_a[k] != sp.side_b[k]);
    CHECK(sp.side_a[1 - k] == sp.side_b[1 - k]);  // tip DOF shared
    // Traversal runs left to right, so side A is above the crack.
    const auto& T = m.triangles[static_cast<std::size_t>(c.ta)];
    double cy = 0;
    for (int v : T) cy += m.vertices[static_cast<std::size_t>(v)].y / 3;
    CHECK(cy > 0.5);
  }
  // Side A DOF at the middle vertex is the same for both edges.
  const int e0 = find_crack_edge(m, t0, mid), e1 = find_crack_edge(m, mid, t1);
  REQUIRE(e0 >= 0);
  REQUIRE(e1 >= 0);
  CHECK(crack_side_dofs(m, e0).side_a[1] == crack_side_dofs(m, e1).side_a[0]);
}

TEST_CASE("crack_side_dofs rejects non-crack edges") {
  const CrackMesh m = build_cracked_mesh(scene({{{0.25, 0.5}, {0.75, 0.5}}}), 0.25);
  const BoundaryEdge& b = m.boundary_edges.front();
  const int id = find_crack_edge(m, b.v0, b.v1);
  CHECK(id == -1);
  CHECK(code_of([&] { crack_side_dofs(m, id); }) == ErrorCode::NotACrackEdge);
  CHECK(code_of([&] { crack_side_dofs(m, 2); }) == ErrorCode::NotACrackEdge);
}

TEST_CASE("close cracks are rejected") {
  const auto near = scene({{{0.2, 0.4}, {0.8, 0.4}}, {{0.2, 0.7}, {0.8, 0.7}}});
  CHECK(code_of([&] { build_cracked_mesh(near, 0.25); }) == ErrorCode::SceneTooFine);
  CHECK_NOTHROW(build_cracked_mesh(near, 0.125));
  // Touching cracks are one feature, not two close ones.
  CHECK_NOTHROW(build_cracked_mesh(scene({{{0.25, 0.5}, {0.5, 0.5}}, {{0.5, 0.5}, {0.5, 0.75}}}), 0.25));
}

TEST_CASE("full-width crack splits the box") {
  const CrackMesh m = build_cracked_mesh(scene({{{0, 0.5}, {1, 0.5}}}), 0.125);
  CHECK(mesh_quality(m).component_count == 2);
  check_against_oracle(m);
  // Every vertex on the line has two DOFs, including the ones on the box boundary.
  for (int i = 0; i <= 8; ++i) CHECK(m.dof_map[static_cast<std::size_t>(vertex_at(m, {i / 8.0, 0.5}))].size() == 2);
}

TEST_CASE("plus sign centre gets one DOF per sector") {
  const CrackMesh m = build_cracked_mesh(
      scene({{{0.5, 0.5}, {0.75, 0.5}}, {{0.5, 0.5}, {0.5, 0.75}}, {{0.5, 0.5}, {0.25, 0.5}}, {{0.5, 0.5}, {0.5, 0.25}}}),
      0.125);
  CHECK(m.dof_map[static_cast<std::size_t>(vertex_at(m, {0.5, 0.5}))].size() == 4);
  CHECK(m.dof_map[static_cast<std::size_t>(vertex_at(m, {0.75, 0.5}))].size() == 1);
  check_against_oracle(m);
}

TEST_CASE("closed loop encloses a second component") {
  const auto c = exp::circle_scene(64, 0.5, 1.0);
  const CrackMesh m = build_cracked_mesh(c, 1.0 / 32);
  CHECK(mesh_quality(m).component_count == 2);
  check_against_oracle(m);
  CHECK(m.snap_error <= m.h);
}

TEST_CASE("snap error certifies the distance to the meshed scene") {
  std::vector<CompactScene> fx = {
      exp::segment_scene({-0.7, -0.2}, {0.9, 0.33}),
      exp::segment_scene({-1, -1}, {1, 1}),
      exp::segment_scene({-0.5, 0.1}, {0.6, 0.1}),
      exp::l_shape(),
      exp::plus_sign_arms(pi / 3),
      exp::plus_sign_segments(pi / 6),
      exp::tangent_pair(1.0),
      exp::pacman(4.0, 128),
      exp::circle_scene(128, 1.0),
      exp::segment_scene({0.01, 0.02}, {0.013, 0.021}),
  };
  for (std::size_t i = 0; i < fx.size(); ++i) {
    CAPTURE(i);
    const CrackMesh m = build_cracked_mesh(fx[i], 0.05);
    const double sampled = oracle::sampled_hausdorff(fx[i], m.snapped, 1e-3);
    CHECK(m.snap_error + 1e-12 >= sampled);
    CHECK(m.snap_error <= m.h);
    check_against_oracle(m);
  }
}

TEST_CASE("grid-aligned cracks snap exactly at every spacing") {
  const auto s = scene({{{0.25, 0.25}, {0.75, 0.25}, {0.75, 0.75}}, {{0.125, 0.875}, {0.375, 0.625}}});
  for (double h : {0.125, 0.0625, 0.03125}) {
    const CrackMesh m = build_cracked_mesh(s, h);
    CHECK(m.snap_error == 0.0);
  }
}

TEST_CASE("solids are removed as a staircase") {
  const auto s = scene({}, 0.5, {0.5, 0.5}, {{{0.3, 0.3}, {0.7, 0.3}, {0.7, 0.7}, {0.3, 0.7}}});
  const CrackMesh m = build_cracked_mesh(s, 0.1);
  const MeshQuality q = mesh_quality(m);
  const double removed = (2.0 * 100 - static_cast<double>(m.triangles.size())) * 0.005;
  CHECK(q.area_total == doctest::Approx(1.0 - removed).epsilon(1e-12));
  CHECK(std::abs(removed - 0.16) <= 0.1 * 1.6);  // within h * perimeter
  int solid = 0, outer = 0;
  for (const BoundaryEdge& b : m.boundary_edges) (b.tag == EdgeTag::SOLID ? solid : outer)++;
  CHECK(outer == 40);
  CHECK(solid > 0);
  CHECK(m.snap_error >= 0.0);
}

TEST_CASE("disk domains carry an outer polygonal boundary") {
  MeshOptions opt;
  opt.disk_radius = 1.0;
  const CrackMesh m = build_cracked_mesh(exp::segment_scene({-0.5, 0}, {0.5, 0}, 0.8), 0.05, opt);
  const MeshQuality q = mesh_quality(m);
  CHECK(std::abs(q.area_total - pi) < 2 * pi * 0.05 * std::sqrt(2.0));
  for (const BoundaryEdge& b : m.boundary_edges) {
    CHECK(b.tag == EdgeTag::OUTER);
    CHECK(geom::norm(m.vertices[static_cast<std::size_t>(b.v0)]) > 1.0 - 0.1);
  }
  check_against_oracle(m);
}

TEST_CASE("graded meshes stay conforming and shape regular") {
  MeshOptions opt;
  opt.refine_points = {{0.3125, 0.5}, {0.3203125, 0.5}};
  opt.refine_hmin = 1.0 / 1024;
  opt.refine_grade = 0.5;
  const auto s = scene({{{0, 0.5}, {0.3125, 0.5}}, {{0.3203125, 0.5}, {1, 0.5}}});
  const CrackMesh m = build_cracked_mesh(s, 1.0 / 16, opt);
  const MeshQuality q = mesh_quality(m);
  CHECK(q.min_angle >= 45.0 - 1e-9);
  CHECK(q.area_total == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(q.component_count == 1);  // the gap keeps the two halves connected
  CHECK(m.snap_error == 0.0);
  for (std::size_t t = 0; t < m.triangles.size(); ++t) CHECK(m.area(static_cast<int>(t)) > 0);
  // No vertex sits inside another triangle's edge.
  std::set<std::pair<int, int>> edges;
  for (const auto& T : m.triangles)
    for (int k = 0; k < 3; ++k) edges.insert({std::min(T[k], T[(k + 1) % 3]), std::max(T[k], T[(k + 1) % 3])});
  int hanging = 0;
  for (const auto& [a, b] : edges)
    for (std::size_t v = 0; v < m.vertices.size(); ++v) {
      const Point pa = m.vertices[static_cast<std::size_t>(a)], pb = m.vertices[static_cast<std::size_t>(b)];
      if (static_cast<int>(v) == a || static_cast<int>(v) == b) continue;
      if (geom::point_segment_distance(m.vertices[v], {pa, pb}) < 1e-14) ++hanging;
    }
  CHECK(hanging == 0);
  check_against_oracle(m);
  // Without the refinement the gap is too narrow.
  CHECK(code_of([&] { build_cracked_mesh(s, 1.0 / 16); }) == ErrorCode::SceneTooFine);
}

TEST_CASE("mesh dump lists every table") {
  const CrackMesh m = build_cracked_mesh(scene({{{0.25, 0.5}, {0.75, 0.5}}}), 0.25);
  const std::string d = mesh_dump(m);
  CHECK(d.rfind("# moscolab mesh v1\n", 0) == 0);
  CHECK(d.find("vertices 25\n") != std::string::npos);
  CHECK(d.find("triangles 32\n") != std::string::npos);
  CHECK(d.find("dofs 26\n") != std::string::npos);
  CHECK(d.find("crack_edges 2\n") != std::string::npos);
  CHECK(d.find("boundary_edges 16\n") != std::string::npos);
}

TEST_CASE("invalid spacing") {
  CHECK(code_of([] { build_cracked_mesh(scene({}), 0.0); }) == ErrorCode::InvalidArgument);
  CHECK(code_of([] { build_cracked_mesh(scene({}), -1.0); }) == ErrorCode::InvalidArgument);
}
