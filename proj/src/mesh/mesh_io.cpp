#include <cstdio>
#include <sstream>

#include "mosco/core/io.hpp"
#include "mosco/mesh/crackmesh.hpp"

namespace mosco::mesh {

std::string mesh_dump(const CrackMesh& m) {
  std::ostringstream os;
  os.precision(17);
  os << "# moscolab mesh v1\n";
  os << "h " << m.h << "\nsnap_error " << m.snap_error << "\n";
  os << "vertices " << m.vertices.size() << "\n";
  for (const Point& p : m.vertices) os << p.x << ' ' << p.y << "\n";
  os << "triangles " << m.triangles.size() << "\n";
  for (std::size_t t = 0; t < m.triangles.size(); ++t) {
    const auto& T = m.triangles[t];
    const auto& D = m.tri_dofs[t];
    os << T[0] << ' ' << T[1] << ' ' << T[2] << ' ' << D[0] << ' ' << D[1] << ' ' << D[2] << "\n";
  }
  os << "dofs " << m.dof_vertex.size() << "\n";
  for (int v : m.dof_vertex) os << v << "\n";
  os << "crack_edges " << m.crack_edges.size() << "\n";
  for (const CrackEdge& c : m.crack_edges)
    os << c.v0 << ' ' << c.v1 << ' ' << c.a0 << ' ' << c.a1 << ' ' << c.b0 << ' ' << c.b1 << ' ' << c.polyline << "\n";
  os << "boundary_edges " << m.boundary_edges.size() << "\n";
  for (const BoundaryEdge& b : m.boundary_edges)
    os << b.v0 << ' ' << b.v1 << ' ' << (b.tag == EdgeTag::OUTER ? "OUTER" : "SOLID") << "\n";
  return os.str();
}

void save_mesh(const std::string& path, const CrackMesh& m) { write_file_atomic(path, mesh_dump(m)); }

}  // namespace mosco::mesh
