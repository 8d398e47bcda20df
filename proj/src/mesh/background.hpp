/**
 * @file background.hpp
 * @brief Criss-cross background grid and newest-vertex bisection (internal).
 */
#pragma once

#include <array>
#include <vector>

#include "mosco/mesh/crackmesh.hpp"

namespace mosco::mesh::detail {

// Triangles are (peak, left, right), counter-clockwise; (left, right) is the refinement edge.
struct Background {
  std::vector<Point> v;
  std::vector<std::array<int, 3>> tri;
};

Background structured_grid(Point lo, int n, double h);

/// Grade towards opt.refine_points; the result lists only the leaf triangles.
void grade(Background& b, const MeshOptions& opt);

}  // namespace mosco::mesh::detail
