/**
 * @file scattering.hpp
 * @brief Sound-hard scattering of a plane wave, truncated with a first-order absorbing boundary.
 *
 * Total-field formulation on B(s_trunc) \ K: find u with
 *   int sigma grad u . grad v - k^2 int q u v - ik int_{|x|=s} u v
 *     = int_{|x|=s} (d_nu u_i - ik u_i) v,     u_i = exp(ik x . d).
 * Cracks and solids carry the natural (zero flux) condition.
 */
#pragma once

#include "mosco/pde/fields.hpp"

namespace mosco::pde {

struct ScatterConfig {
  double k = 2.0;
  Point d{1, 0};
  double k_lo = 0.5, k_hi = 10.0;  // admissible wavenumber window, 0 < k_lo < k < k_hi
  double s_trunc = 3.0;
  CoefficientField coeff;
};

struct ScatterResult {
  FeField u;    // total field
  FeField us;   // scattered field u - u_i
  FeField ui;   // incident field, nodal interpolant
  double residual = 0;  // ||A u - b|| / ||b||
};

/// Radius of the smallest origin-centred disk containing the scene's cracks and solids.
double scene_radius(const geom::CompactScene& K);

/// The mesh must be a disk mesh of radius s_trunc centred at the origin.
ScatterResult solve_scattering(const CrackMesh& m, const ScatterConfig& cfg);

}  // namespace mosco::pde
