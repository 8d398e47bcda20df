/**
 * @file linalg.hpp
 * @brief P1 element data, CSR matrices on the DOF graph and the SPD solve path.
 */
#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "mosco/core/kernels.hpp"
#include "mosco/pde/fields.hpp"

namespace mosco::pde {

struct P1Element {
  std::array<int, 3> dof;
  std::array<Point, 3> x;
  std::array<Point, 3> grad;  // gradients of the barycentric coordinates
  double area = 0;
  Point edge_mid(int k) const;  // midpoint of the edge opposite corner k
};

std::vector<P1Element> p1_elements(const CrackMesh& m);

/// Square CSR matrix with the sparsity pattern of the P1 DOF graph.
struct CsrMatrix {
  int n = 0;
  std::vector<std::int64_t> row_ptr;
  std::vector<std::int32_t> col;
  std::vector<double> val;

  kernels::CsrView view() const { return {static_cast<std::size_t>(n), row_ptr.data(), col.data(), val.data()}; }
  /// Slot of (i, j); the entry must be in the pattern.
  std::size_t slot(int i, int j) const;
  void add(int i, int j, double v) { val[slot(i, j)] += v; }
  void zero();
  std::vector<double> diagonal() const;
  std::vector<double> multiply(const std::vector<double>& x, kernels::Exec ex = kernels::Exec::Parallel) const;
};

CsrMatrix p1_pattern(const CrackMesh& m);

/// K + M style assembly: stiffness weight per element and mass via the edge-midpoint rule.
void add_stiffness(CsrMatrix& A, const std::vector<P1Element>& el, const std::vector<double>& weight);
void add_mass(CsrMatrix& A, const std::vector<P1Element>& el, double c = 1.0);

struct SolveReport {
  bool converged = false;
  int iterations = 0;
  double residual = 0;  // ||b - A x||_2
  bool used_direct = false;
};

/// Jacobi-preconditioned conjugate gradients; x is the initial guess.
SolveReport pcg_jacobi(const CsrMatrix& A, const std::vector<double>& b, std::vector<double>& x, double atol,
                       int max_iter, kernels::Exec ex = kernels::Exec::Parallel);

/// PCG, falling back to a sparse LDL^T factorization. Throws SingularSystem if both fail.
SolveReport solve_spd(const CsrMatrix& A, const std::vector<double>& b, std::vector<double>& x, double atol,
                      kernels::Exec ex = kernels::Exec::Parallel);

}  // namespace mosco::pde
