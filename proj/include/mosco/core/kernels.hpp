/**
 * @file kernels.hpp
 * @brief Hot loops with an OpenMP variant and a plain serial reference.
 *
 * The parallel reductions use a fixed block partition that does not depend
 * on the thread count, so results are bit-identical for any --threads value.
 * The serial variants are straightforward loops kept for tests and benchmarks.
 */
#pragma once

#include <cstddef>
#include <cstdint>

namespace mosco::kernels {

enum class Exec { Serial, Parallel };

/// Number of OpenMP threads used by Exec::Parallel (1 if OpenMP is absent).
void set_threads(int n);
int threads();

struct CsrView {
  std::size_t rows = 0;
  const std::int64_t* row_ptr = nullptr;
  const std::int32_t* col = nullptr;
  const double* val = nullptr;
};

double dot(const double* a, const double* b, std::size_t n, Exec ex);
double max_abs(const double* a, std::size_t n, Exec ex);
/// y = A x
void spmv(const CsrView& A, const double* x, double* y, Exec ex);
/// y += alpha x
void axpy(double alpha, const double* x, double* y, std::size_t n, Exec ex);

/// Apply f(i) for i in [0, n). Iterations must be independent.
template <class F>
void for_each_index(std::size_t n, Exec ex, F&& f) {
  if (ex == Exec::Parallel) {
    const std::int64_t m = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < m; ++i) f(static_cast<std::size_t>(i));
  } else {
    for (std::size_t i = 0; i < n; ++i) f(i);
  }
}

}  // namespace mosco::kernels
