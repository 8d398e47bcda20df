/**
 * @file norms.hpp
 * @brief Lebesgue, Sobolev and boundary-trace norms of P1 fields.
 *
 * Integrals of |u|^p over triangles and edges are evaluated in closed form
 * for linear u and any real p >= 1 (divided differences of |u|^{p+2}), so
 * the values are exact up to rounding. Complex fields support p = 2 only.
 */
#pragma once

#include <vector>

#include "mosco/pde/fields.hpp"

namespace mosco::pde {

/// Triangle mask: region[t] != 0 selects triangle t. Null selects everything.
using Region = const std::vector<char>*;

struct BoundaryPart {
  bool outer = true;
  bool solid = true;
  bool crack = true;
};

enum class TraceKind { OUTER, SOLID, CRACK };

/// |u|^+ on one boundary edge, linear between its two nodal values.
struct TraceEdge {
  Point a, b;
  double v0 = 0, v1 = 0;
  int dof_a0 = -1, dof_a1 = -1;  // DOFs realizing the max at each end
  TraceKind kind = TraceKind::OUTER;
};

/// |u|^+: max of the two one-sided traces on crack edges, the inner trace on solid/outer edges.
std::vector<TraceEdge> trace_plus(const FeField& u, BoundaryPart part = {});

double lp_norm(const FeField& u, double p, Region region = nullptr);
double grad_lp_norm(const FeField& u, double p, Region region = nullptr);
/// (||u||_p^p + ||grad u||_p^p)^{1/p}
double w1p_norm(const FeField& u, double p, Region region = nullptr);
double trace_norm(const FeField& u, double s, BoundaryPart part = {});

enum class NormKind { Lp, W1p, GradLp, TraceLs };
double norm(const FeField& u, NormKind kind, double exponent, Region region = nullptr, BoundaryPart part = {});

/// Exact integrals of |linear|^q (q >= 0): over a triangle with nodal values u and area A,
/// and over a segment of length L.
double tri_power_integral(double u0, double u1, double u2, double area, double q);
double edge_power_integral(double v0, double v1, double length, double q);

}  // namespace mosco::pde
