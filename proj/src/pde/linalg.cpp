#include "mosco/pde/linalg.hpp"

#include <Eigen/Sparse>
#include <algorithm>
#include <cmath>
#include <limits>

#include "mosco/core/error.hpp"

namespace mosco::pde {

Point P1Element::edge_mid(int k) const { return geom::lerp(x[static_cast<std::size_t>((k + 1) % 3)], x[static_cast<std::size_t>((k + 2) % 3)], 0.5); }

std::vector<P1Element> p1_elements(const CrackMesh& m) {
  std::vector<P1Element> out(m.triangles.size());
  for (std::size_t t = 0; t < m.triangles.size(); ++t) {
    P1Element& e = out[t];
    for (int k = 0; k < 3; ++k) {
      e.dof[static_cast<std::size_t>(k)] = m.tri_dofs[t][static_cast<std::size_t>(k)];
      e.x[static_cast<std::size_t>(k)] = m.vertices[static_cast<std::size_t>(m.triangles[t][static_cast<std::size_t>(k)])];
    }
    const double twice = geom::cross(e.x[1] - e.x[0], e.x[2] - e.x[0]);
    e.area = 0.5 * twice;
    for (int k = 0; k < 3; ++k) {
      // grad lambda_k = (y_{k+1} - y_{k+2}, x_{k+2} - x_{k+1}) / (2 area)
      const Point a = e.x[static_cast<std::size_t>((k + 1) % 3)], b = e.x[static_cast<std::size_t>((k + 2) % 3)];
      e.grad[static_cast<std::size_t>(k)] = {(a.y - b.y) / twice, (b.x - a.x) / twice};
    }
  }
  return out;
}

std::size_t CsrMatrix::slot(int i, int j) const {
  const auto b = col.begin() + row_ptr[static_cast<std::size_t>(i)], e = col.begin() + row_ptr[static_cast<std::size_t>(i) + 1];
  const auto it = std::lower_bound(b, e, j);
  return static_cast<std::size_t>(it - col.begin());
}

void CsrMatrix::zero() { std::fill(val.begin(), val.end(), 0.0); }

std::vector<double> CsrMatrix::diagonal() const {
  std::vector<double> d(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) d[static_cast<std::size_t>(i)] = val[slot(i, i)];
  return d;
}

std::vector<double> CsrMatrix::multiply(const std::vector<double>& x, kernels::Exec ex) const {
  std::vector<double> y(static_cast<std::size_t>(n));
  kernels::spmv(view(), x.data(), y.data(), ex);
  return y;
}

CsrMatrix p1_pattern(const CrackMesh& m) {
  CsrMatrix A;
  A.n = m.ndofs();
  std::vector<std::vector<std::int32_t>> rows(static_cast<std::size_t>(A.n));
  for (const auto& D : m.tri_dofs)
    for (int a : D)
      for (int b : D) rows[static_cast<std::size_t>(a)].push_back(b);
  A.row_ptr.assign(static_cast<std::size_t>(A.n) + 1, 0);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto& r = rows[i];
    std::sort(r.begin(), r.end());
    r.erase(std::unique(r.begin(), r.end()), r.end());
    A.row_ptr[i + 1] = A.row_ptr[i] + static_cast<std::int64_t>(r.size());
    A.col.insert(A.col.end(), r.begin(), r.end());
  }
  A.val.assign(A.col.size(), 0.0);
  return A;
}

void add_stiffness(CsrMatrix& A, const std::vector<P1Element>& el, const std::vector<double>& weight) {
  for (std::size_t t = 0; t < el.size(); ++t) {
    const P1Element& e = el[t];
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        A.add(e.dof[static_cast<std::size_t>(a)], e.dof[static_cast<std::size_t>(b)],
              weight[t] * e.area * geom::dot(e.grad[static_cast<std::size_t>(a)], e.grad[static_cast<std::size_t>(b)]));
  }
}

void add_mass(CsrMatrix& A, const std::vector<P1Element>& el, double c) {
  for (const P1Element& e : el)
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        A.add(e.dof[static_cast<std::size_t>(a)], e.dof[static_cast<std::size_t>(b)], c * e.area / 12.0 * (a == b ? 2.0 : 1.0));
}

namespace {

// Residual level below which rounding in A x dominates: a few ulps of |A| |x|.
double rounding_floor(const CsrMatrix& A, const std::vector<double>& x, kernels::Exec ex) {
  double amax = 0;
  for (int i = 0; i < A.n; ++i) {
    double s = 0;
    for (auto k = A.row_ptr[static_cast<std::size_t>(i)]; k < A.row_ptr[static_cast<std::size_t>(i) + 1]; ++k) s += std::abs(A.val[static_cast<std::size_t>(k)]);
    amax = std::max(amax, s);
  }
  return 16 * std::numeric_limits<double>::epsilon() * amax * std::sqrt(kernels::dot(x.data(), x.data(), x.size(), ex));
}

}  // namespace

SolveReport pcg_jacobi(const CsrMatrix& A, const std::vector<double>& b, std::vector<double>& x, double atol,
                       int max_iter, kernels::Exec ex) {
  const std::size_t n = static_cast<std::size_t>(A.n);
  SolveReport rep;
  const double amax = rounding_floor(A, std::vector<double>(1, 1.0), ex);  // 16 eps max row sum
  const std::vector<double> diag = A.diagonal();
  std::vector<double> r = A.multiply(x, ex), z(n), p(n), Ap(n);
  for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - r[i];
  for (std::size_t i = 0; i < n; ++i) z[i] = r[i] / diag[i];
  p = z;
  double rz = kernels::dot(r.data(), z.data(), n, ex);
  double rn = std::sqrt(kernels::dot(r.data(), r.data(), n, ex));
  auto target = [&] { return std::max(atol, amax * std::sqrt(kernels::dot(x.data(), x.data(), n, ex))); };
  for (rep.iterations = 0; rep.iterations < max_iter && rn > target(); ++rep.iterations) {
    kernels::spmv(A.view(), p.data(), Ap.data(), ex);
    const double pAp = kernels::dot(p.data(), Ap.data(), n, ex);
    if (!(pAp > 0)) break;
    const double alpha = rz / pAp;
    kernels::axpy(alpha, p.data(), x.data(), n, ex);
    kernels::axpy(-alpha, Ap.data(), r.data(), n, ex);
    kernels::for_each_index(n, ex, [&](std::size_t i) { z[i] = r[i] / diag[i]; });
    const double rz_new = kernels::dot(r.data(), z.data(), n, ex);
    const double beta = rz_new / rz;
    rz = rz_new;
    kernels::for_each_index(n, ex, [&](std::size_t i) { p[i] = z[i] + beta * p[i]; });
    rn = std::sqrt(kernels::dot(r.data(), r.data(), n, ex));
  }
  // Recompute the true residual; the recursive one drifts.
  r = A.multiply(x, ex);
  for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - r[i];
  rep.residual = std::sqrt(kernels::dot(r.data(), r.data(), n, ex));
  rep.converged = rep.residual <= target();
  return rep;
}

namespace {

bool ldlt(const CsrMatrix& A, const std::vector<double>& b, std::vector<double>& x) {
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(A.val.size());
  for (int i = 0; i < A.n; ++i)
    for (auto k = A.row_ptr[static_cast<std::size_t>(i)]; k < A.row_ptr[static_cast<std::size_t>(i) + 1]; ++k)
      trip.emplace_back(i, A.col[static_cast<std::size_t>(k)], A.val[static_cast<std::size_t>(k)]);
  Eigen::SparseMatrix<double> M(A.n, A.n);
  M.setFromTriplets(trip.begin(), trip.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> f(M);
  if (f.info() != Eigen::Success) return false;
  const Eigen::Map<const Eigen::VectorXd> bb(b.data(), A.n);
  Eigen::VectorXd xx = f.solve(bb);
  // One step of iterative refinement.
  xx += f.solve(bb - M * xx);
  if (f.info() != Eigen::Success || !xx.allFinite()) return false;
  x.assign(xx.data(), xx.data() + A.n);
  return true;
}

}  // namespace

SolveReport solve_spd(const CsrMatrix& A, const std::vector<double>& b, std::vector<double>& x, double atol,
                      kernels::Exec ex) {
  SolveReport rep = pcg_jacobi(A, b, x, atol, std::max(1000, 4 * A.n), ex);
  if (rep.converged) return rep;
  if (!ldlt(A, b, x)) fail(ErrorCode::SingularSystem, "SPD factorization failed");
  std::vector<double> r = A.multiply(x, ex);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
  rep.residual = std::sqrt(kernels::dot(r.data(), r.data(), r.size(), ex));
  rep.used_direct = true;
  rep.converged = rep.residual <= std::max(atol, rounding_floor(A, x, ex));
  if (!rep.converged) fail(ErrorCode::SingularSystem, "SPD solve did not reach the requested residual");
  return rep;
}

}  // namespace mosco::pde
