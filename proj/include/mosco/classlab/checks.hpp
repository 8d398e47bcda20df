/**
 * @file checks.hpp
 * @brief Three-valued class predicates, decomposition constructions and bounds.
 *
 * PASS means a sufficient test succeeded, FAIL means a certified violation of
 * a necessary condition was found, UNKNOWN means neither.
 *
 * Sufficient test (graph): for chart centers c sampled every r/8 along the
 * set, all chord directions of K ∩ B(c, 17r/16) fit in a double cone of
 * half-angle atan(sqrt(L^2 - 1)). At arc endpoints e, K ∩ B(e, r) must in
 * addition lie on one side of e along the chart line; arcs may end inside
 * the ball. Necessary tests: a point with >= 3 branches, or a sub-arc inside
 * B_r(p) with chord/length < 1/L^2.
 */
#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "mosco/classlab/types.hpp"
#include "mosco/core/kernels.hpp"
#include "mosco/geom/set_distance.hpp"

namespace mosco::classlab {

struct CheckOptions {
  double tol = 1e-3;  ///< condition points are sampled every tol/2
};

std::vector<Point> compute_boundary_points(const Arc& arc);

Verdict check_mr(const Arc& arc, double r, double L, const CheckOptions& opt = {});

struct FrResult {
  Verdict verdict;
  std::vector<Point> sing;
};
FrResult check_fr(const CompactScene& scene, const Piece& piece, double r, double L, int M0, const CheckOptions& opt = {});

/// Union of the arcs' boundary points (deduplicated).
std::vector<Point> sing_points(const CompactScene& scene, const Piece& piece);
/// Points of the piece's union that are ends of the union (one branch or isolated).
std::vector<Point> bdry_points(const CompactScene& scene, const Piece& piece);

enum class Anchor { SING, BDRY };

struct GluingReport {
  Verdict verdict;
  double measured_a = 0.0;  ///< min dist(x, others)/delta over sampled x with 0 < delta <= delta0 (linear omega)
};
GluingReport check_gluing(const CompactScene& scene, const Decomposition& dec, Anchor anchor, const Modulus& omega,
                          const CheckOptions& opt = {});

/// Lemma-style constructive radius: rbar / (4 (64 L^2)^M0).
double sbar_value(double rbar, double L, int M0);

struct FarPoint {
  Point y;
  double sbar = 0.0;
  double distance = 0.0;  ///< dist(y, sing(K))
};
FarPoint far_point_from_singular(const CompactScene& scene, const Decomposition& dec, Point x, double rbar, double L,
                                 int M0);

std::uint64_t component_bound(const ClassParams& params, double R);

struct ExteriorOptions {
  double tol = 1e-3;
  kernels::Exec exec = kernels::Exec::Parallel;
};

/// Distances to K at nodes lo + h (i, j), row-major with i fastest.
std::vector<double> distance_grid(const geom::SetDistance& D, Point lo, double h, std::size_t nx, std::size_t ny,
                                  kernels::Exec ex);
Verdict check_exterior_connectedness(const CompactScene& scene, const Modulus& gamma, const std::vector<double>& t_samples,
                                     const ExteriorOptions& opt = {});

using Interval1 = std::pair<double, double>;
std::vector<Interval1> gagliardo_decompose(const std::vector<Interval1>& S, const ConeSpec& cone);

Verdict check_g_class(const CompactScene& scene, double r, double L, const ConeSpec& cone, const CheckOptions& opt = {});

struct GToFr {
  Decomposition decomposition;
  double r_prime = 0.0;
  double L_prime = 0.0;
  int M0 = 0;
};
GToFr g_to_fr_decompose(const CompactScene& scene, double r, double L, const ConeSpec& cone, const CheckOptions& opt = {});

/// Problems with a decomposition witness (empty = valid): coverage of the
/// crack set and pairwise piece intersections inside sing ∩ sing.
std::vector<std::string> validate_decomposition(const CompactScene& scene, const Decomposition& dec);

}  // namespace mosco::classlab
