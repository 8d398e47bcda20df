#include "mosco/pde/neumann.hpp"

#include <cmath>
#include <limits>

#include "mosco/core/error.hpp"

namespace mosco::pde {

namespace {

constexpr double kMach = std::numeric_limits<double>::epsilon();

// Values of the three barycentric functions at the midpoint of the edge opposite corner q.
inline double phi_at_mid(int i, int q) { return i == q ? 0.0 : 0.5; }

Point gradient(const P1Element& e, const std::vector<double>& u) {
  Point g{0, 0};
  for (int k = 0; k < 3; ++k) g = g + u[static_cast<std::size_t>(e.dof[static_cast<std::size_t>(k)])] * e.grad[static_cast<std::size_t>(k)];
  return g;
}

inline double mid_value(const P1Element& e, const std::vector<double>& u, int q) {
  return 0.5 * (u[static_cast<std::size_t>(e.dof[static_cast<std::size_t>((q + 1) % 3)])] +
                u[static_cast<std::size_t>(e.dof[static_cast<std::size_t>((q + 2) % 3)])]);
}

double norm2(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

NeumannProblem::NeumannProblem(const CrackMesh& m, double p, const SourceData& src)
    : el_(p1_elements(m)), pattern_(p1_pattern(m)), p_(p), load_(static_cast<std::size_t>(m.ndofs()), 0.0) {
  if (!(p > 1) || !(p <= 2)) fail(ErrorCode::BadExponent, "p must lie in (1, 2], got " + std::to_string(p));
  for (const P1Element& e : el_) {
    const double w = e.area / 3;
    for (int q = 0; q < 3; ++q) {
      const Point x = e.edge_mid(q);
      const double fv = src.f ? src.f(x) : 0.0;
      const Point Fv = src.F ? src.F(x) : Point{0, 0};
      for (int i = 0; i < 3; ++i)
        load_[static_cast<std::size_t>(e.dof[static_cast<std::size_t>(i)])] +=
            w * (fv * phi_at_mid(i, q) + geom::dot(Fv, e.grad[static_cast<std::size_t>(i)]));
    }
  }
  for (double v : load_)
    if (!std::isfinite(v)) fail(ErrorCode::InvalidArgument, "source data is not integrable on the mesh");
}

int NeumannProblem::size() const { return pattern_.n; }

double NeumannProblem::energy(const std::vector<double>& u, double eps) const {
  const double e2 = eps * eps;
  double J = 0;
  for (const P1Element& e : el_) {
    const Point g = gradient(e, u);
    J += e.area * std::pow(e2 + geom::dot(g, g), p_ / 2) / p_;
    for (int q = 0; q < 3; ++q) {
      const double v = mid_value(e, u, q);
      J += e.area / 3 * std::pow(e2 + v * v, p_ / 2) / p_;
    }
  }
  for (std::size_t i = 0; i < u.size(); ++i) J -= load_[i] * u[i];
  return J;
}

std::vector<double> NeumannProblem::residual(const std::vector<double>& u, double eps) const {
  const double e2 = eps * eps;
  std::vector<double> r(u.size(), 0.0);
  for (const P1Element& e : el_) {
    const Point g = gradient(e, u);
    const double gg = geom::dot(g, g);
    const double a = (p_ == 2) ? 1.0 : (e2 + gg > 0 ? std::pow(e2 + gg, (p_ - 2) / 2) : 0.0);
    for (int i = 0; i < 3; ++i) r[static_cast<std::size_t>(e.dof[static_cast<std::size_t>(i)])] += e.area * a * geom::dot(g, e.grad[static_cast<std::size_t>(i)]);
    for (int q = 0; q < 3; ++q) {
      const double v = mid_value(e, u, q);
      const double b = (p_ == 2) ? 1.0 : (e2 + v * v > 0 ? std::pow(e2 + v * v, (p_ - 2) / 2) : 0.0);
      for (int i = 0; i < 3; ++i) r[static_cast<std::size_t>(e.dof[static_cast<std::size_t>(i)])] += e.area / 3 * b * v * phi_at_mid(i, q);
    }
  }
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= load_[i];
  return r;
}

std::vector<double> NeumannProblem::exact_residual(const std::vector<double>& u) const {
  if (p_ == 2) return residual(u, 0.0);
  std::vector<double> r(u.size(), 0.0);
  for (const P1Element& e : el_) {
    Point g = gradient(e, u);
    double umax = 0, gsum = 0;
    for (int k = 0; k < 3; ++k) {
      umax = std::max(umax, std::abs(u[static_cast<std::size_t>(e.dof[static_cast<std::size_t>(k)])]));
      gsum += geom::norm(e.grad[static_cast<std::size_t>(k)]);
    }
    // Gradients below the rounding level of the nodal values are indistinguishable from zero.
    if (geom::norm(g) <= 64 * kMach * umax * gsum) g = {0, 0};
    const double gn = geom::norm(g);
    const double a = gn > 0 ? std::pow(gn, p_ - 2) : 0.0;
    for (int i = 0; i < 3; ++i) r[static_cast<std::size_t>(e.dof[static_cast<std::size_t>(i)])] += e.area * a * geom::dot(g, e.grad[static_cast<std::size_t>(i)]);
    for (int q = 0; q < 3; ++q) {
      const double v = mid_value(e, u, q);
      const double b = v != 0 ? std::pow(std::abs(v), p_ - 2) : 0.0;
      for (int i = 0; i < 3; ++i) r[static_cast<std::size_t>(e.dof[static_cast<std::size_t>(i)])] += e.area / 3 * b * v * phi_at_mid(i, q);
    }
  }
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= load_[i];
  return r;
}

void NeumannProblem::hessian(const std::vector<double>& u, double eps, CsrMatrix& H) const {
  const double e2 = eps * eps;
  H.zero();
  for (const P1Element& e : el_) {
    const Point g = gradient(e, u);
    const double s = e2 + geom::dot(g, g);
    const double a = std::pow(s, (p_ - 2) / 2), c = (p_ - 2) * std::pow(s, (p_ - 4) / 2);
    double mq[3];
    for (int q = 0; q < 3; ++q) {
      const double v = mid_value(e, u, q);
      const double t = e2 + v * v;
      mq[q] = std::pow(t, (p_ - 2) / 2) + (p_ - 2) * std::pow(t, (p_ - 4) / 2) * v * v;
    }
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        const Point gi = e.grad[static_cast<std::size_t>(i)], gj = e.grad[static_cast<std::size_t>(j)];
        double v = e.area * (a * geom::dot(gi, gj) + c * geom::dot(g, gi) * geom::dot(g, gj));
        for (int q = 0; q < 3; ++q) v += e.area / 3 * mq[q] * phi_at_mid(i, q) * phi_at_mid(j, q);
        H.add(e.dof[static_cast<std::size_t>(i)], e.dof[static_cast<std::size_t>(j)], v);
      }
  }
}

CsrMatrix NeumannProblem::linear_operator() const {
  CsrMatrix A = pattern_;
  A.zero();
  add_stiffness(A, el_, std::vector<double>(el_.size(), 1.0));
  add_mass(A, el_);
  return A;
}

NeumannResult solve_neumann(const CrackMesh& m, double p, const SourceData& src, const NeumannOptions& opt) {
  const NeumannProblem P(m, p, src);
  const std::size_t n = static_cast<std::size_t>(P.size());
  NeumannResult res;
  std::vector<double> u(n, 0.0);
  const double bnorm = norm2(P.load());
  const double lin_tol = std::min(0.1 * opt.tol, 1e-13 * bnorm);

  if (p == 2) {
    const CsrMatrix A = P.linear_operator();
    if (bnorm > 0) {
      const SolveReport rep = solve_spd(A, P.load(), u, std::max(lin_tol, 1e-300), opt.exec);
      res.linear_iterations = rep.iterations;
    }
    res.residual = norm2(P.residual(u, 0.0));
    res.status = res.residual <= opt.tol ? SolveStatus::Converged : SolveStatus::NoConvergence;
    res.u = FeField::real(m, std::move(u));
    return res;
  }

  if (bnorm == 0) {  // the unique minimizer
    res.u = FeField::real(m, std::move(u));
    return res;
  }

  CsrMatrix H = P.pattern();
  double eps = opt.eps0;
  for (;;) {
    for (int it = 0; it < opt.max_iter; ++it) {
      std::vector<double> r = P.residual(u, eps);
      const double rn = norm2(r);
      if (rn <= 0.5 * opt.tol) break;
      P.hessian(u, eps, H);
      std::vector<double> neg(n), du(n, 0.0);
      for (std::size_t i = 0; i < n; ++i) neg[i] = -r[i];
      const double atol = std::max(0.05 * opt.tol, std::min(0.1 * rn, rn * rn));
      const SolveReport rep = solve_spd(H, neg, du, atol, opt.exec);
      res.linear_iterations += rep.iterations;
      ++res.newton_steps;
      // Armijo backtracking on J_eps; near the minimum the energy is flat to
      // rounding, so a step that lowers the residual norm is accepted too.
      const double J0 = P.energy(u, eps);
      double slope = 0;
      for (std::size_t i = 0; i < n; ++i) slope += r[i] * du[i];
      double t = 1.0;
      std::vector<double> trial(n);
      bool accepted = false;
      for (int ls = 0; ls < 40; ++ls, t *= 0.5) {
        for (std::size_t i = 0; i < n; ++i) trial[i] = u[i] + t * du[i];
        if (P.energy(trial, eps) <= J0 + 1e-4 * t * slope || norm2(P.residual(trial, eps)) < rn * (1 - 1e-4 * t)) {
          accepted = true;
          break;
        }
      }
      if (!accepted) break;
      u.swap(trial);
    }
    res.eps = eps;
    res.residual = norm2(P.exact_residual(u));
    if (res.residual <= opt.tol) break;
    if (eps / opt.eps_factor < opt.eps_floor * (1 - 1e-12)) {
      res.status = SolveStatus::NoConvergence;
      break;
    }
    eps /= opt.eps_factor;
  }
  res.u = FeField::real(m, std::move(u));
  return res;
}

}  // namespace mosco::pde
