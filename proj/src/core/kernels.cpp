#include "mosco/core/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mosco::kernels {

namespace {
constexpr std::size_t kBlocks = 64;
}

void set_threads(int n) {
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

int threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

double dot(const double* a, const double* b, std::size_t n, Exec ex) {
  if (ex == Exec::Serial) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
  }
  double part[kBlocks];
  const std::int64_t nb = kBlocks;
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 0; k < nb; ++k) {
    const std::size_t lo = n * k / kBlocks, hi = n * (k + 1) / kBlocks;
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += a[i] * b[i];
    part[k] = s;
  }
  double s = 0.0;
  for (std::size_t k = 0; k < kBlocks; ++k) s += part[k];
  return s;
}

double max_abs(const double* a, std::size_t n, Exec ex) {
  double m = 0.0;
  if (ex == Exec::Serial) {
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, std::abs(a[i]));
    return m;
  }
  const std::int64_t nn = static_cast<std::int64_t>(n);
#pragma omp parallel for reduction(max : m) schedule(static)
  for (std::int64_t i = 0; i < nn; ++i) m = std::max(m, std::abs(a[i]));
  return m;
}

void spmv(const CsrView& A, const double* x, double* y, Exec ex) {
  auto row = [&](std::size_t i) {
    double s = 0.0;
    for (std::int64_t k = A.row_ptr[i]; k < A.row_ptr[i + 1]; ++k) s += A.val[k] * x[A.col[k]];
    y[i] = s;
  };
  for_each_index(A.rows, ex, row);
}

void axpy(double alpha, const double* x, double* y, std::size_t n, Exec ex) {
  for_each_index(n, ex, [&](std::size_t i) { y[i] += alpha * x[i]; });
}

}  // namespace mosco::kernels
