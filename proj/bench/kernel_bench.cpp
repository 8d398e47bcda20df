/**
 * @file kernel_bench.cpp
 * @brief Serial reference vs OpenMP kernels on a cracked-box stiffness system.
 *
 * Run with --benchmark_filter and OMP_NUM_THREADS as usual. The second
 * template argument selects the variant: 0 serial, 1 parallel.
 */
#include <benchmark/benchmark.h>

#include <map>
#include <random>

#include "mosco/geom/scene.hpp"
#include "mosco/mesh/crackmesh.hpp"
#include "mosco/pde/linalg.hpp"

using namespace mosco;
using kernels::Exec;

namespace {

struct System {
  pde::CsrMatrix A;
  std::vector<double> x, b;
};

const System& system_for(int inv_h) {
  static std::map<int, System> cache;
  auto it = cache.find(inv_h);
  if (it != cache.end()) return it->second;
  geom::SceneSpec s;
  s.box_radius = 1.0;
  s.cracks = {{{-0.5, 0.0}, {0.5, 0.0}}, {{0.0, 0.2}, {0.3, 0.7}}};
  const auto m = mesh::build_cracked_mesh(geom::build_compact_set(s), 1.0 / inv_h);
  const auto el = pde::p1_elements(m);
  System sys;
  sys.A = pde::p1_pattern(m);
  pde::add_stiffness(sys.A, el, std::vector<double>(el.size(), 1.0));
  pde::add_mass(sys.A, el);
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int i = 0; i < sys.A.n; ++i) {
    sys.x.push_back(u(rng));
    sys.b.push_back(u(rng));
  }
  return cache.emplace(inv_h, std::move(sys)).first->second;
}

Exec exec(const benchmark::State& st) { return st.range(1) ? Exec::Parallel : Exec::Serial; }

void BM_spmv(benchmark::State& st) {
  const auto& s = system_for(static_cast<int>(st.range(0)));
  std::vector<double> y(s.x.size());
  for (auto _ : st) {
    kernels::spmv(s.A.view(), s.x.data(), y.data(), exec(st));
    benchmark::DoNotOptimize(y.data());
  }
  st.counters["dofs"] = s.A.n;
}

void BM_dot(benchmark::State& st) {
  const auto& s = system_for(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(kernels::dot(s.x.data(), s.b.data(), s.x.size(), exec(st)));
  st.counters["dofs"] = s.A.n;
}

void BM_pcg(benchmark::State& st) {
  const auto& s = system_for(static_cast<int>(st.range(0)));
  int its = 0;
  for (auto _ : st) {
    std::vector<double> x(s.b.size(), 0.0);
    its = pde::pcg_jacobi(s.A, s.b, x, 1e-10, 10000, exec(st)).iterations;
    benchmark::DoNotOptimize(x.data());
  }
  st.counters["dofs"] = s.A.n;
  st.counters["iterations"] = its;
}

}  // namespace

BENCHMARK(BM_spmv)->ArgsProduct({{32, 64, 128}, {0, 1}});
BENCHMARK(BM_dot)->ArgsProduct({{32, 64, 128}, {0, 1}});
BENCHMARK(BM_pcg)->ArgsProduct({{32, 64}, {0, 1}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
