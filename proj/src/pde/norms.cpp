#include "mosco/pde/norms.hpp"

#include <algorithm>
#include <cmath>

#include "mosco/core/error.hpp"
#include "mosco/pde/linalg.hpp"

namespace mosco::pde {

namespace {

void check_exponent(double p) {
  if (!(p >= 1) || !std::isfinite(p)) fail(ErrorCode::BadExponent, "norm exponent must be finite and >= 1");
}

bool selected(Region r, std::size_t t) { return !r || (*r)[t] != 0; }

// Degree-4 six-point rule in barycentric coordinates, weights summing to 1.
constexpr double kA = 0.445948490915965, kB = 0.091576213509771;
constexpr double kWA = 0.223381589678011, kWB = 0.109951743655322;

}  // namespace

double edge_power_integral(double v0, double v1, double L, double q) {
  const double a = std::abs(v0), b = std::abs(v1);
  if ((v0 < 0 && v1 > 0) || (v0 > 0 && v1 < 0))  // crosses zero
    return L * (std::pow(a, q + 1) + std::pow(b, q + 1)) / ((q + 1) * (a + b));
  const double spread = std::abs(a - b), m = std::max(a, b);
  if (spread <= 1e-4 * m || m == 0) {
    // Smooth, nearly constant: 3-point Gauss-Legendre is exact to rounding here.
    const double g = std::sqrt(0.6);
    auto f = [&](double s) { return std::pow(0.5 * (a + b) + 0.5 * s * (b - a), q); };
    return L * (5 * f(-g) + 8 * f(0) + 5 * f(g)) / 18;
  }
  return L * (std::pow(b, q + 1) - std::pow(a, q + 1)) / ((q + 1) * (b - a));
}

double tri_power_integral(double u0, double u1, double u2, double A, double q) {
  const double hi = std::max({u0, u1, u2}), lo = std::min({u0, u1, u2});
  const double m = std::max(std::abs(hi), std::abs(lo));
  if (m == 0) return 0.0;
  const bool same_sign = lo >= 0 || hi <= 0;
  if (same_sign && hi - lo <= 1e-3 * m) {
    // Nearly constant: the degree-4 rule is accurate to rounding and avoids cancellation.
    const double u[3] = {u0, u1, u2};
    double s = 0;
    for (int k = 0; k < 3; ++k) {
      const double va = kA * (u[0] + u[1] + u[2]) + (1 - 3 * kA) * u[k];
      const double vb = kB * (u[0] + u[1] + u[2]) + (1 - 3 * kB) * u[k];
      s += kWA * std::pow(std::abs(va), q) + kWB * std::pow(std::abs(vb), q);
    }
    return A * s;
  }
  // int_T F(u) = 2A * Phi[u0, u1, u2] with Phi'' = F; here Phi = |u|^{q+2} / ((q+1)(q+2)).
  double x[3] = {u0, u1, u2};
  std::sort(x, x + 3);
  auto Phi = [q](double u) { return std::pow(std::abs(u), q + 2); };
  auto dd1 = [&](double a, double b) {
    if (b - a <= 1e-12 * std::max(std::abs(a), std::abs(b)))
      return (q + 2) * std::pow(std::abs(a), q + 1) * (a < 0 ? -1.0 : 1.0);
    return (Phi(b) - Phi(a)) / (b - a);
  };
  double dd2;
  if (x[2] - x[0] <= 1e-12 * m) {
    dd2 = 0.5 * (q + 2) * (q + 1) * std::pow(std::abs(x[1]), q);
  } else {
    dd2 = (dd1(x[1], x[2]) - dd1(x[0], x[1])) / (x[2] - x[0]);
  }
  return 2 * A * dd2 / ((q + 1) * (q + 2));
}

std::vector<TraceEdge> trace_plus(const FeField& u, BoundaryPart part) {
  u.validate();
  const CrackMesh& m = *u.mesh;
  auto val = [&](int d) { return u.is_complex() ? std::abs(u.cvalues[static_cast<std::size_t>(d)]) : std::abs(u.values[static_cast<std::size_t>(d)]); };
  std::vector<TraceEdge> out;
  for (const auto& b : m.boundary_edges) {
    const bool outer = b.tag == mesh::EdgeTag::OUTER;
    if ((outer && !part.outer) || (!outer && !part.solid)) continue;
    TraceEdge e;
    e.a = m.vertices[static_cast<std::size_t>(b.v0)];
    e.b = m.vertices[static_cast<std::size_t>(b.v1)];
    e.v0 = val(b.d0);
    e.v1 = val(b.d1);
    e.dof_a0 = b.d0;
    e.dof_a1 = b.d1;
    e.kind = outer ? TraceKind::OUTER : TraceKind::SOLID;
    out.push_back(e);
  }
  if (part.crack)
    for (const auto& c : m.crack_edges) {
      TraceEdge e;
      e.a = m.vertices[static_cast<std::size_t>(c.v0)];
      e.b = m.vertices[static_cast<std::size_t>(c.v1)];
      e.dof_a0 = val(c.a0) >= val(c.b0) ? c.a0 : c.b0;
      e.dof_a1 = val(c.a1) >= val(c.b1) ? c.a1 : c.b1;
      e.v0 = val(e.dof_a0);
      e.v1 = val(e.dof_a1);
      e.kind = TraceKind::CRACK;
      out.push_back(e);
    }
  return out;
}

double lp_norm(const FeField& u, double p, Region region) {
  check_exponent(p);
  u.validate();
  const CrackMesh& m = *u.mesh;
  if (u.is_complex() && p != 2) fail(ErrorCode::BadExponent, "complex fields support p = 2 only");
  double s = 0;
  for (std::size_t t = 0; t < m.triangles.size(); ++t) {
    if (!selected(region, t)) continue;
    const double A = m.area(static_cast<int>(t));
    if (u.is_complex()) {
      const cplx a = u.cat(static_cast<int>(t), 0), b = u.cat(static_cast<int>(t), 1), c = u.cat(static_cast<int>(t), 2);
      s += tri_power_integral(a.real(), b.real(), c.real(), A, 2) + tri_power_integral(a.imag(), b.imag(), c.imag(), A, 2);
    } else {
      s += tri_power_integral(u.at(static_cast<int>(t), 0), u.at(static_cast<int>(t), 1), u.at(static_cast<int>(t), 2), A, p);
    }
  }
  return std::pow(s, 1 / p);
}

double grad_lp_norm(const FeField& u, double p, Region region) {
  check_exponent(p);
  u.validate();
  const auto el = p1_elements(*u.mesh);
  double s = 0;
  for (std::size_t t = 0; t < el.size(); ++t) {
    if (!selected(region, t)) continue;
    double g2 = 0;
    if (u.is_complex()) {
      Point gr{0, 0}, gi{0, 0};
      for (int k = 0; k < 3; ++k) {
        const cplx v = u.cvalues[static_cast<std::size_t>(el[t].dof[static_cast<std::size_t>(k)])];
        gr = gr + v.real() * el[t].grad[static_cast<std::size_t>(k)];
        gi = gi + v.imag() * el[t].grad[static_cast<std::size_t>(k)];
      }
      g2 = geom::dot(gr, gr) + geom::dot(gi, gi);
    } else {
      Point g{0, 0};
      for (int k = 0; k < 3; ++k) g = g + u.values[static_cast<std::size_t>(el[t].dof[static_cast<std::size_t>(k)])] * el[t].grad[static_cast<std::size_t>(k)];
      g2 = geom::dot(g, g);
    }
    s += el[t].area * std::pow(g2, p / 2);
  }
  return std::pow(s, 1 / p);
}

double w1p_norm(const FeField& u, double p, Region region) {
  return std::pow(std::pow(lp_norm(u, p, region), p) + std::pow(grad_lp_norm(u, p, region), p), 1 / p);
}

double trace_norm(const FeField& u, double s, BoundaryPart part) {
  check_exponent(s);
  double sum = 0;
  for (const TraceEdge& e : trace_plus(u, part)) sum += edge_power_integral(e.v0, e.v1, geom::dist(e.a, e.b), s);
  return std::pow(sum, 1 / s);
}

double norm(const FeField& u, NormKind kind, double exponent, Region region, BoundaryPart part) {
  switch (kind) {
    case NormKind::Lp: return lp_norm(u, exponent, region);
    case NormKind::W1p: return w1p_norm(u, exponent, region);
    case NormKind::GradLp: return grad_lp_norm(u, exponent, region);
    case NormKind::TraceLs: return trace_norm(u, exponent, part);
  }
  return 0.0;
}

}  // namespace mosco::pde
