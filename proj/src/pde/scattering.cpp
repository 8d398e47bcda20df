#include "mosco/pde/scattering.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseLU>
#include <cmath>

#include "mosco/core/error.hpp"
#include "mosco/pde/linalg.hpp"

namespace mosco::pde {

double scene_radius(const geom::CompactScene& K) {
  double r = 0;
  for (const Point& p : K.vertices()) r = std::max(r, geom::norm(p));
  return r;
}

ScatterResult solve_scattering(const CrackMesh& m, const ScatterConfig& cfg) {
  if (!(m.disk_radius > 0) || geom::norm(m.disk_center) > 1e-12 || std::abs(m.disk_radius - cfg.s_trunc) > 1e-9 * cfg.s_trunc)
    fail(ErrorCode::InvalidArgument, "scattering needs a disk mesh of radius s_trunc centred at the origin");
  const double R = scene_radius(m.snapped);
  if (!(cfg.s_trunc > std::max(R, cfg.coeff.R0) + 1))
    fail(ErrorCode::BadTruncation, "s_trunc must exceed max(R, R0) + 1 = " + std::to_string(std::max(R, cfg.coeff.R0) + 1));
  if (!(cfg.k_lo > 0) || !(cfg.k > cfg.k_lo) || !(cfg.k < cfg.k_hi))
    fail(ErrorCode::InvalidArgument, "wavenumber outside its admissible window");
  if (std::abs(geom::norm(cfg.d) - 1) > 1e-12) fail(ErrorCode::InvalidArgument, "direction must be a unit vector");
  if (const auto v = cfg.coeff.violation(m)) fail(ErrorCode::InvalidArgument, "coefficient field: " + *v);

  const double k = cfg.k;
  const cplx I(0, 1);
  auto incident = [&](Point x) { return std::exp(I * k * geom::dot(x, cfg.d)); };
  const auto el = p1_elements(m);
  const int n = m.ndofs();
  std::vector<Eigen::Triplet<cplx>> trip;
  trip.reserve(el.size() * 9 + m.boundary_edges.size() * 4);
  for (const P1Element& e : el) {
    Mat2 s{0, 0, 0};
    double qm[3];
    for (int q = 0; q < 3; ++q) {
      const Point x = e.edge_mid(q);
      const Mat2 sq = cfg.coeff.sigma_at(x);
      s.a11 += sq.a11 / 3;
      s.a12 += sq.a12 / 3;
      s.a22 += sq.a22 / 3;
      qm[q] = cfg.coeff.q_at(x);
    }
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        const double stiff = e.area * geom::dot(s.apply(e.grad[static_cast<std::size_t>(i)]), e.grad[static_cast<std::size_t>(j)]);
        double mass = 0;
        for (int q = 0; q < 3; ++q) mass += e.area / 3 * qm[q] * (i == q ? 0.0 : 0.5) * (j == q ? 0.0 : 0.5);
        trip.emplace_back(e.dof[static_cast<std::size_t>(i)], e.dof[static_cast<std::size_t>(j)], cplx(stiff - k * k * mass, 0));
      }
  }
  Eigen::VectorXcd b = Eigen::VectorXcd::Zero(n);
  const double gl[3] = {-std::sqrt(0.6), 0, std::sqrt(0.6)}, gw[3] = {5.0 / 9, 8.0 / 9, 5.0 / 9};
  for (const auto& be : m.boundary_edges) {
    if (be.tag != mesh::EdgeTag::OUTER) continue;
    const Point a = m.vertices[static_cast<std::size_t>(be.v0)], c = m.vertices[static_cast<std::size_t>(be.v1)];
    const double L = geom::dist(a, c);
    const Point nu{(c.y - a.y) / L, -(c.x - a.x) / L};  // the triangle lies to the left of v0 -> v1
    const int dofs[2] = {be.d0, be.d1};
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) trip.emplace_back(dofs[i], dofs[j], -I * k * L / 6.0 * (i == j ? 2.0 : 1.0));
    for (int g = 0; g < 3; ++g) {
      const double t = 0.5 * (1 + gl[g]);
      const Point x = geom::lerp(a, c, t);
      const cplx ui = incident(x);
      const cplx flux = I * k * geom::dot(cfg.d, nu) * ui - I * k * ui;
      b[dofs[0]] += 0.5 * L * gw[g] * flux * (1 - t);
      b[dofs[1]] += 0.5 * L * gw[g] * flux * t;
    }
  }
  Eigen::SparseMatrix<cplx> A(n, n);
  A.setFromTriplets(trip.begin(), trip.end());
  A.makeCompressed();
  Eigen::SparseLU<Eigen::SparseMatrix<cplx>, Eigen::COLAMDOrdering<int>> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success) fail(ErrorCode::SingularSystem, "sparse LU failed; try a different mesh spacing");
  Eigen::VectorXcd x = lu.solve(b);
  const double bn = b.norm();
  double rel = bn > 0 ? (b - A * x).norm() / bn : (A * x).norm();
  if (rel > 1e-10) {
    x += lu.solve(b - A * x);
    rel = bn > 0 ? (b - A * x).norm() / bn : (A * x).norm();
  }
  if (!x.allFinite() || rel > 1e-8)
    fail(ErrorCode::SingularSystem, "scattering residual " + std::to_string(rel) + " above 1e-8");

  ScatterResult out;
  std::vector<cplx> u(static_cast<std::size_t>(n)), us(static_cast<std::size_t>(n)), ui(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    u[static_cast<std::size_t>(i)] = x[i];
    ui[static_cast<std::size_t>(i)] = incident(m.dof_point(i));
    us[static_cast<std::size_t>(i)] = x[i] - ui[static_cast<std::size_t>(i)];
  }
  out.u = FeField::complex(m, std::move(u));
  out.us = FeField::complex(m, std::move(us));
  out.ui = FeField::complex(m, std::move(ui));
  out.residual = rel;
  return out;
}

}  // namespace mosco::pde
