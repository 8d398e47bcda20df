/**
 * @file neumann.hpp
 * @brief Neumann problem for -div(|grad u|^{p-2} grad u) + |u|^{p-2} u = f - div F, 1 < p <= 2.
 *
 * The discrete solution minimizes
 *   J(u) = 1/p int (|grad u|^p + |u|^p) - int f u - int F . grad u
 * over the P1 space of a cracked mesh, so the crack faces carry natural
 * (zero flux) conditions. For p < 2 both powers are regularized with
 * (eps^2 + |.|^2)^{(p-2)/2} and eps is lowered until the unregularized
 * residual meets the tolerance.
 */
#pragma once

#include "mosco/core/kernels.hpp"
#include "mosco/pde/fields.hpp"
#include "mosco/pde/linalg.hpp"

namespace mosco::pde {

struct NeumannOptions {
  double eps0 = 1.0;
  double eps_factor = 10.0;
  double eps_floor = 1e-12;
  double tol = 1e-10;   // on the Euclidean norm of the residual vector
  int max_iter = 100;   // Newton steps per eps stage
  kernels::Exec exec = kernels::Exec::Parallel;
};

enum class SolveStatus { Converged, NoConvergence };

struct NeumannResult {
  FeField u;
  SolveStatus status = SolveStatus::Converged;
  double residual = 0;  // unregularized
  double eps = 0;       // last stage (0 for p = 2)
  int newton_steps = 0;
  int linear_iterations = 0;
};

/// Quadrature-level data reused by energy, residual and Hessian.
class NeumannProblem {
 public:
  NeumannProblem(const CrackMesh& m, double p, const SourceData& src);

  int size() const;
  double p() const { return p_; }
  const std::vector<double>& load() const { return load_; }

  /// Regularized energy J_eps and its gradient (eps = 0: the exact functional).
  double energy(const std::vector<double>& u, double eps) const;
  std::vector<double> residual(const std::vector<double>& u, double eps) const;
  /// Unregularized residual with gradients at rounding level treated as zero.
  std::vector<double> exact_residual(const std::vector<double>& u) const;

  /// Hessian of J_eps written into H (pattern from p1_pattern).
  void hessian(const std::vector<double>& u, double eps, CsrMatrix& H) const;
  const CsrMatrix& pattern() const { return pattern_; }
  /// Stiffness plus mass, the p = 2 operator.
  CsrMatrix linear_operator() const;

 private:
  std::vector<P1Element> el_;
  CsrMatrix pattern_;
  double p_;
  std::vector<double> load_;
};

NeumannResult solve_neumann(const CrackMesh& m, double p, const SourceData& src, const NeumannOptions& opt = {});

}  // namespace mosco::pde
