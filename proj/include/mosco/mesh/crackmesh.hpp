/**
 * @file crackmesh.hpp
 * @brief Structured triangulations of box-minus-scene with duplicated DOFs along cracks.
 *
 * The background grid has square cells of side h split along alternating
 * diagonals (reflection symmetric). Optional newest-vertex bisection grades
 * the grid towards given points. Triangles whose centroid lies in a solid
 * (or outside the disk domain) are dropped; crack polylines are snapped to
 * mesh edges, and every vertex gets one DOF per connected component of its
 * triangle fan once crack edges are cut.
 */
#pragma once

#include <array>
#include <string>
#include <vector>

#include "mosco/geom/scene.hpp"

namespace mosco::mesh {

using geom::CompactScene;
using geom::Point;

enum class EdgeTag { OUTER, SOLID };

struct CrackEdge {
  int v0 = 0, v1 = 0;  // vertices, oriented along the crack traversal
  int a0 = 0, a1 = 0;  // DOFs at v0, v1 seen from the left triangle (side A)
  int b0 = 0, b1 = 0;  // and from the right triangle (side B)
  int ta = 0, tb = 0;  // the two triangles
  int polyline = 0;
};

struct BoundaryEdge {
  int v0 = 0, v1 = 0;
  int d0 = 0, d1 = 0;  // DOFs of the adjacent triangle
  int tri = 0;
  EdgeTag tag = EdgeTag::OUTER;
};

struct MeshOptions {
  /// Disk domain (center, radius) instead of the scene box, if radius > 0.
  Point disk_center{};
  double disk_radius = 0.0;
  /// Grading: refine until legs <= max(hmin, grade * dist(refine point)).
  std::vector<Point> refine_points;
  double refine_hmin = 0.0;
  double refine_grade = 0.5;
};

struct CrackMesh {
  std::vector<Point> vertices;
  std::vector<std::array<int, 3>> triangles;  // counter-clockwise
  std::vector<std::array<int, 3>> tri_dofs;   // DOF of each corner
  std::vector<int> tri_id;                    // index in the background triangulation
  std::vector<std::vector<int>> dof_map;      // vertex -> DOFs
  std::vector<int> dof_vertex;                // DOF -> vertex
  std::vector<CrackEdge> crack_edges;
  std::vector<BoundaryEdge> boundary_edges;
  double h = 0.0;           // background spacing
  Point disk_center{};      // disk domain, if disk_radius > 0
  double disk_radius = 0.0;
  double snap_error = 0.0;  // certified upper bound on d_H(requested, snapped)
  CompactScene snapped;     // the scene actually meshed (cracks on edges)
  std::size_t background_size = 0;

  int ndofs() const { return static_cast<int>(dof_vertex.size()); }
  double area(int t) const;
  Point dof_point(int d) const { return vertices[static_cast<std::size_t>(dof_vertex[static_cast<std::size_t>(d)])]; }
};

CrackMesh build_cracked_mesh(const CompactScene& scene, double h, const MeshOptions& opt = {});

struct SidePair {
  std::array<int, 2> side_a;
  std::array<int, 2> side_b;
};
SidePair crack_side_dofs(const CrackMesh& m, int crack_edge_id);

/// Index into crack_edges of the crack edge between two vertices (-1 if none).
int find_crack_edge(const CrackMesh& m, int v0, int v1);

struct MeshQuality {
  double min_angle = 0.0;  // degrees
  double max_aspect = 0.0; // longest edge / (2 sqrt(3) inradius); 1 for equilateral
  double area_total = 0.0;
  int component_count = 0; // triangle components under non-crack adjacency
};
MeshQuality mesh_quality(const CrackMesh& m);

/// Plain-text tables (format in the README).
std::string mesh_dump(const CrackMesh& m);
void save_mesh(const std::string& path, const CrackMesh& m);

}  // namespace mosco::mesh
