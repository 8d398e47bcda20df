/**
 * @file compare.hpp
 * @brief Differences of fields living on different cracked meshes over one background grid.
 *
 * Both meshes must come from the same box, spacing and grading, so that
 * triangles correspond through tri_id. Each field is extended by zero where
 * its mesh has no triangle. Triangles whose interior meets one of the given
 * (requested, unsnapped) crack segments are left out and their area is
 * reported instead.
 */
#pragma once

#include <functional>
#include <vector>

#include "mosco/pde/fields.hpp"

namespace mosco::exp {

struct GridDifference {
  double value = 0;     // ||a - b||_{L^p}
  double gradient = 0;  // ||S_a grad a - S_b grad b||_{L^p}, S = sqrt(sigma) (identity by default)
  double joint = 0;     // ||(a - b, S_a grad a - S_b grad b)||_{L^p}
  double excluded_area = 0;
  int compared = 0;  // triangles that entered the integrals
};

struct CompareOptions {
  double p = 2.0;
  std::vector<geom::Segment> cut;
  std::function<bool(geom::Point)> keep;  // centroid filter; empty keeps everything
  std::function<pde::Mat2(geom::Point)> sigma_a, sigma_b;
};

GridDifference grid_difference(const pde::FeField& a, const pde::FeField& b, const CompareOptions& opt);

/// True if the segment passes through the open triangle.
bool segment_cuts_triangle(const geom::Segment& s, const geom::Point& p0, const geom::Point& p1, const geom::Point& p2);

}  // namespace mosco::exp
