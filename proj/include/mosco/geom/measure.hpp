/**
 * @file measure.hpp
 * @brief Certified Hausdorff distances, symmetric-difference areas and H^1 length.
 */
#pragma once

#include <vector>

#include "mosco/core/kernels.hpp"
#include "mosco/geom/scene.hpp"
#include "mosco/geom/set_distance.hpp"

namespace mosco::geom {

struct CertifiedScalar {
  double value = 0.0;
  double error_bound = 0.0;
  double lo() const { return value - error_bound; }
  double hi() const { return value + error_bound; }
};

/// sup over A of dist(., B), certified to within tol.
CertifiedScalar one_sided_hausdorff(const CompactScene& A, const SetDistance& dB, double tol);

CertifiedScalar hausdorff_distance(const CompactScene& K, const CompactScene& Kt, double tol);

/// d_H between the complements (outer box minus the open domain box \ scene).
CertifiedScalar hausdorff_complementary_distance(const CompactScene& D, const CompactScene& Dt, double outer_radius,
                                                 double tol);

/// Exact d_H between finite point sets (either empty -> EmptyScene).
double hausdorff_points(const std::vector<Point>& A, const std::vector<Point>& B);

/// |D1 Δ D2| with D_i = box \ scene_i, by pixel counting.
CertifiedScalar symmetric_difference_area(const CompactScene& D1, const CompactScene& D2, double resolution,
                                          kernels::Exec ex = kernels::Exec::Parallel);

/// H^1 measure: crack lengths with collinear overlaps counted once, plus solid perimeters.
double length_measure(const CompactScene& K);

}  // namespace mosco::geom
