#include <doctest.h>

#include <chrono>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <set>

#include "mosco/core/error.hpp"
#include "mosco/exp/fixtures.hpp"
#include "mosco/mesh/crackmesh.hpp"
#include "mosco/pde/constants.hpp"
#include "mosco/pde/linalg.hpp"
#include "mosco/pde/neumann.hpp"
#include "mosco/pde/norms.hpp"
#include "mosco/pde/scattering.hpp"

using namespace mosco;
using namespace mosco::pde;
using std::numbers::pi;

namespace {

geom::CompactScene unit_box(std::vector<std::vector<Point>> cracks = {}, std::vector<std::vector<Point>> solids = {}) {
  geom::SceneSpec s;
  s.box_radius = 0.5;
  s.box_center = {0.5, 0.5};
  s.cracks = std::move(cracks);
  s.solids = std::move(solids);
  return geom::build_compact_set(s);
}

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::InvalidArgument;
}

double max_dev(const FeField& u, double c) {
  double m = 0;
  for (double v : u.values) m = std::max(m, std::abs(v - c));
  return m;
}

}  // namespace

TEST_CASE("constant source gives the constant solution") {
  const std::vector<geom::CompactScene> scenes = {
      unit_box(), unit_box({{{0.25, 0.5}, {0.75, 0.5}}}), unit_box({{{0, 0.5}, {1, 0.5}}}),
      unit_box({{{0.25, 0.25}, {0.75, 0.75}}}), unit_box({}, {{{0.375, 0.375}, {0.625, 0.375}, {0.625, 0.625}, {0.375, 0.625}}})};
  SourceData one;
  one.f = [](Point) { return 1.0; };
  for (const auto& s : scenes)
    for (double p : {1.5, 2.0}) {
      const auto m = mesh::build_cracked_mesh(s, 1.0 / 16);
      const auto r = solve_neumann(m, p, one);
      CAPTURE(p);
      CHECK(r.status == SolveStatus::Converged);
      CHECK(max_dev(r.u, 1.0) <= 1e-10);
    }
}

TEST_CASE("zero data gives exactly zero") {
  const auto m = mesh::build_cracked_mesh(unit_box({{{0.25, 0.5}, {0.75, 0.5}}}), 1.0 / 8);
  for (double p : {1.2, 1.5, 2.0}) {
    const auto r = solve_neumann(m, p, {});
    CHECK(max_dev(r.u, 0.0) == 0.0);
  }
  CHECK(code_of([&] { solve_neumann(m, 1.0, {}); }) == ErrorCode::BadExponent);
  CHECK(code_of([&] { solve_neumann(m, 2.5, {}); }) == ErrorCode::BadExponent);
}

namespace {

// L2 error against an exact solution with a degree-4 rule on each triangle (independent of the library norms).
double l2_error(const FeField& u, const std::function<double(Point)>& exact) {
  const auto& m = *u.mesh;
  const double a = 0.445948490915965, b = 0.091576213509771, wa = 0.223381589678011, wb = 0.109951743655322;
  double s = 0;
  for (std::size_t t = 0; t < m.triangles.size(); ++t) {
    Point x[3];
    double v[3];
    for (int k = 0; k < 3; ++k) {
      x[k] = m.vertices[static_cast<std::size_t>(m.triangles[t][static_cast<std::size_t>(k)])];
      v[k] = u.values[static_cast<std::size_t>(m.tri_dofs[t][static_cast<std::size_t>(k)])];
    }
    for (int k = 0; k < 3; ++k)
      for (auto [c, w] : {std::pair{a, wa}, std::pair{b, wb}}) {
        double l[3] = {c, c, c};
        l[k] = 1 - 2 * c;
        const Point p{l[0] * x[0].x + l[1] * x[1].x + l[2] * x[2].x, l[0] * x[0].y + l[1] * x[1].y + l[2] * x[2].y};
        const double e = l[0] * v[0] + l[1] * v[1] + l[2] * v[2] - exact(p);
        s += m.area(static_cast<int>(t)) * w * e * e;
      }
  }
  return std::sqrt(s);
}

}  // namespace

TEST_CASE("manufactured solution converges at second order") {
  auto exact = [](Point x) { return std::cos(pi * x.x) * std::cos(pi * x.y); };
  SourceData src;
  src.f = [&](Point x) { return (1 + 2 * pi * pi) * exact(x); };
  std::vector<double> err;
  for (double h : {1.0 / 8, 1.0 / 16, 1.0 / 32}) {
    const auto m = mesh::build_cracked_mesh(unit_box(), h);
    const auto r = solve_neumann(m, 2.0, src);
    CHECK(r.status == SolveStatus::Converged);
    err.push_back(l2_error(r.u, exact));
  }
  const double rate1 = std::log2(err[0] / err[1]), rate2 = std::log2(err[1] / err[2]);
  CHECK(rate1 > 1.8);
  CHECK(rate2 > 1.8);
  CHECK(rate2 < 2.2);
}

TEST_CASE("residual is the gradient of the energy") {
  const auto m = mesh::build_cracked_mesh(unit_box({{{0.25, 0.5}, {0.75, 0.5}}}), 1.0 / 8);
  SourceData src;
  src.f = [](Point x) { return 1 + x.x; };
  src.F = [](Point x) { return Point{x.y, -0.5 * x.x}; };
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(-1, 1);
  for (double p : {1.3, 1.5, 2.0})
    for (double eps : {0.1, 1e-3}) {
      const NeumannProblem P(m, p, src);
      std::vector<double> u(static_cast<std::size_t>(P.size())), v(u.size());
      for (auto& x : u) x = U(rng);
      for (auto& x : v) x = U(rng);
      const auto r = P.residual(u, eps);
      double dir = 0;
      for (std::size_t i = 0; i < u.size(); ++i) dir += r[i] * v[i];
      const double step = 1e-5;
      std::vector<double> up = u, um = u;
      for (std::size_t i = 0; i < u.size(); ++i) {
        up[i] += step * v[i];
        um[i] -= step * v[i];
      }
      const double fd = (P.energy(up, eps) - P.energy(um, eps)) / (2 * step);
      CAPTURE(p);
      CAPTURE(eps);
      CHECK(std::abs(fd - dir) <= 1e-5 * std::abs(dir));
    }
}

TEST_CASE("nonlinear solutions satisfy the weak form and minimize the energy") {
  const auto m = mesh::build_cracked_mesh(unit_box({{{0.25, 0.5}, {0.75, 0.5}}}), 1.0 / 16);
  SourceData src;
  src.f = [](Point x) { return 1 + x.x; };
  std::mt19937_64 rng(11);
  std::normal_distribution<double> N(0, 1);
  for (double p : {1.5, 2.0}) {
    NeumannOptions opt;
    opt.tol = 1e-10;
    const auto r = solve_neumann(m, p, src, opt);
    CAPTURE(p);
    REQUIRE(r.status == SolveStatus::Converged);
    const NeumannProblem P(m, p, src);
    const auto res = P.exact_residual(r.u.values);
    const double J = P.energy(r.u.values, 0.0);
    for (int trial = 0; trial < 50; ++trial) {
      std::vector<double> phi(res.size());
      double pn = 0, dot = 0;
      for (auto& x : phi) {
        x = N(rng);
        pn += x * x;
      }
      pn = std::sqrt(pn);
      for (std::size_t i = 0; i < phi.size(); ++i) dot += res[i] * phi[i];
      CHECK(std::abs(dot) <= opt.tol * (1 + pn));
      std::vector<double> w = r.u.values;
      for (std::size_t i = 0; i < w.size(); ++i) w[i] += 1e-3 * phi[i] / pn;
      CHECK(J <= P.energy(w, 0.0));
    }
  }
}

TEST_CASE("Galerkin orthogonality at p = 2") {
  const auto m = mesh::build_cracked_mesh(unit_box({{{0.2, 0.3}, {0.8, 0.7}}}), 1.0 / 16);
  SourceData src;
  src.f = [](Point x) { return std::sin(3 * x.x) + x.y; };
  const auto r = solve_neumann(m, 2.0, src);
  const NeumannProblem P(m, 2.0, src);
  const auto res = P.residual(r.u.values, 0.0);
  double mx = 0;
  for (double v : res) mx = std::max(mx, std::abs(v));
  CHECK(mx <= 1e-10);
}

TEST_CASE("a full-width crack decouples the two halves") {
  SourceData src;
  src.f = [](Point x) { return std::max(0.0, 0.5 - x.y); };
  const auto cracked = mesh::build_cracked_mesh(unit_box({{{0, 0.5}, {1, 0.5}}}), 1.0 / 16);
  const auto lower = mesh::build_cracked_mesh(unit_box({}, {{{0, 0.5}, {1, 0.5}, {1, 1}, {0, 1}}}), 1.0 / 16);
  for (double p : {1.5, 2.0}) {
    const auto a = solve_neumann(cracked, p, src);
    const auto b = solve_neumann(lower, p, src);
    CAPTURE(p);
    // Upper side: source free, so zero. Lower side: the same values as the lower-half problem.
    for (int t = 0; t < static_cast<int>(cracked.triangles.size()); ++t) {
      double cy = 0;
      for (int v : cracked.triangles[static_cast<std::size_t>(t)]) cy += cracked.vertices[static_cast<std::size_t>(v)].y / 3;
      if (cy > 0.5)
        for (int k = 0; k < 3; ++k) CHECK(std::abs(a.u.at(t, k)) <= 1e-12);
    }
    for (int d = 0; d < lower.ndofs(); ++d) {
      const Point x = lower.dof_point(d);
      double best = 1e300;
      // The lower-side DOF of the same vertex is the one with a nonzero value (or the only one).
      for (int e = 0; e < cracked.ndofs(); ++e)
        if (geom::dist(cracked.dof_point(e), x) < 1e-12) best = std::min(best, std::abs(a.u.values[static_cast<std::size_t>(e)] - b.u.values[static_cast<std::size_t>(d)]));
      CHECK(best <= 1e-8);
    }
  }
}

TEST_CASE("power integrals are exact for linear data") {
  // Oracle: midpoint sums over a 2^k subdivision, extrapolated.
  auto fine = [](double u0, double u1, double u2, double q) {
    const int n = 400;
    double s = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n - i; ++j) {
        // two sub-triangles per cell, centroids in barycentric coordinates
        const double a = (i + 1.0 / 3) / n, b = (j + 1.0 / 3) / n;
        s += std::pow(std::abs((1 - a - b) * u0 + a * u1 + b * u2), q);
        if (j < n - i - 1) {
          const double c = (i + 2.0 / 3) / n, d = (j + 2.0 / 3) / n;
          s += std::pow(std::abs((1 - c - d) * u0 + c * u1 + d * u2), q);
        }
      }
    return s * 0.5 / (n * n);  // area 1/2 reference triangle
  };
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(-1, 1);
  for (double q : {1.0, 1.5, 2.0, 3.0, 6.0})
    for (int k = 0; k < 5; ++k) {
      const double u0 = U(rng), u1 = U(rng), u2 = U(rng);
      CAPTURE(q);
      CHECK(tri_power_integral(u0, u1, u2, 0.5, q) == doctest::Approx(fine(u0, u1, u2, q)).epsilon(2e-4));
    }
  CHECK(tri_power_integral(2, 2, 2, 0.5, 3) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(tri_power_integral(1, 1 + 1e-9, 1 - 1e-9, 1, 2.5) == doctest::Approx(1.0).epsilon(1e-12));
  // int_0^1 |2t - 1|^q = 1/(q+1)
  CHECK(edge_power_integral(-1, 1, 1, 2.5) == doctest::Approx(1 / 3.5).epsilon(1e-14));
  CHECK(edge_power_integral(1, 3, 2, 2) == doctest::Approx(2 * 13.0 / 3).epsilon(1e-14));
  CHECK(tri_power_integral(0, 1, 0, 0.5, 2) == doctest::Approx(1.0 / 12).epsilon(1e-14));
}

TEST_CASE("norm examples") {
  const auto m = mesh::build_cracked_mesh(unit_box({{{0.25, 0.5}, {0.75, 0.5}}}), 1.0 / 8);
  const auto one = FeField::constant(m, 1.0);
  for (double p : {1.0, 1.5, 2.0, 3.0}) CHECK(lp_norm(one, p) == doctest::Approx(1.0).epsilon(1e-13));
  const auto x1 = FeField::interpolate(m, [](Point x) { return x.x; });
  CHECK(grad_lp_norm(x1, 2) == doctest::Approx(1.0).epsilon(1e-13));
  CHECK(norm(x1, NormKind::W1p, 2) == doctest::Approx(std::sqrt(1 + 1.0 / 3)).epsilon(1e-13));
  for (double s : {1.0, 2.0, 3.0}) CHECK(trace_norm(one, s) == doctest::Approx(std::pow(4.5, 1 / s)).epsilon(1e-13));
  CHECK(code_of([&] { lp_norm(one, 0.5); }) == ErrorCode::BadExponent);
  std::vector<char> lower(m.triangles.size(), 0);
  for (std::size_t t = 0; t < m.triangles.size(); ++t) {
    double cy = 0;
    for (int v : m.triangles[t]) cy += m.vertices[static_cast<std::size_t>(v)].y / 3;
    lower[t] = cy < 0.5;
  }
  CHECK(lp_norm(one, 1, &lower) == doctest::Approx(0.5).epsilon(1e-13));
}

TEST_CASE("trace_plus picks the larger one-sided trace") {
  const auto m = mesh::build_cracked_mesh(unit_box({{{0.25, 0.5}, {0.75, 0.5}}}), 1.0 / 8);
  // 1 on side A DOFs of the crack, 0 elsewhere.
  std::vector<double> v(static_cast<std::size_t>(m.ndofs()), 0.0);
  for (const auto& c : m.crack_edges) {
    v[static_cast<std::size_t>(c.a0)] = 1;
    v[static_cast<std::size_t>(c.a1)] = 1;
  }
  // Tips are shared; set them to 1 as well so both sides agree there.
  const auto u = FeField::real(m, v);
  for (const auto& e : trace_plus(u, {false, false, true})) {
    CHECK(e.v0 == 1.0);
    CHECK(e.v1 == 1.0);
  }
  // Continuous field: |u|^+ = |u| on the outer boundary.
  const auto w = FeField::interpolate(m, [](Point x) { return x.x - 0.5; });
  for (const auto& e : trace_plus(w, {true, false, false})) {
    CHECK(e.v0 == doctest::Approx(std::abs(e.a.x - 0.5)));
    CHECK(e.v1 == doctest::Approx(std::abs(e.b.x - 0.5)));
  }
  // Solid edges see the inner value only.
  const auto ms = mesh::build_cracked_mesh(unit_box({}, {{{0.375, 0.375}, {0.625, 0.375}, {0.625, 0.625}, {0.375, 0.625}}}), 1.0 / 8);
  const auto c = FeField::constant(ms, -2.5);
  const auto tr = trace_plus(c, {false, true, false});
  CHECK(!tr.empty());
  for (const auto& e : tr) CHECK(e.v0 == 2.5);
}

TEST_CASE("stiffness entries between the two crack sides vanish") {
  const auto m = mesh::build_cracked_mesh(unit_box({{{0.25, 0.5}, {0.75, 0.5}}}), 1.0 / 8);
  const NeumannProblem P(m, 2.0, {});
  const CsrMatrix A = P.linear_operator();
  // DOFs seen from one side only (tip DOFs are shared and excluded).
  std::set<int> side_a, side_b;
  for (const auto& c : m.crack_edges) {
    side_a.insert({c.a0, c.a1});
    side_b.insert({c.b0, c.b1});
  }
  std::set<int> only_a, only_b;
  for (int d : side_a)
    if (!side_b.count(d)) only_a.insert(d);
  for (int d : side_b)
    if (!side_a.count(d)) only_b.insert(d);
  REQUIRE(only_a.size() == 3);
  REQUIRE(only_b.size() == 3);
  for (int a : only_a)
    for (int b : only_b) {
      const std::size_t k = A.slot(a, b);
      const bool in_pattern = k < static_cast<std::size_t>(A.row_ptr[static_cast<std::size_t>(a) + 1]) && A.col[k] == b;
      CHECK(!in_pattern);
    }
  // u = 1 on side-A DOFs, 0 on side B: the B rows see nothing from across the crack.
  std::vector<double> u(static_cast<std::size_t>(m.ndofs()), 0.0);
  for (int a : only_a) u[static_cast<std::size_t>(a)] = 1;
  const auto Au = A.multiply(u);
  for (int b : only_b) CHECK(Au[static_cast<std::size_t>(b)] == 0.0);
}

TEST_CASE("constant estimates") {
  const auto m = mesh::build_cracked_mesh(unit_box(), 1.0 / 8);
  EstimateOptions opt;
  opt.iters = 60;
  SUBCASE("the estimate bounds the ratio of every start") {
    const auto spec = ConstantSpec::sobolev(1.0, 2.0);
    const auto est = estimate_best_constant(m, spec, opt);
    CHECK(est.constant >= constant_ratio(FeField::constant(m, 1.0), spec));
    CHECK(est.constant == doctest::Approx(constant_ratio(est.maximizer, spec)).epsilon(1e-12));
    // On the unit square the constant field gives |Q|^{1/2} / |Q| = 1.
    CHECK(constant_ratio(FeField::constant(m, 1.0), spec) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("fixed seed, fixed answer") {
    const auto spec = ConstantSpec::friedrichs(1.5);
    const auto a = estimate_best_constant(m, spec, opt);
    const auto b = estimate_best_constant(m, spec, opt);
    CHECK(a.constant == b.constant);
    CHECK(a.maximizer.values == b.maximizer.values);
  }
  SUBCASE("inadmissible exponents") {
    CHECK(code_of([] { validate_spec(ConstantSpec::sobolev(1.0, 2.5)); }) == ErrorCode::BadExponent);
    CHECK(code_of([] { validate_spec(ConstantSpec::sobolev(1.5, 7.0)); }) == ErrorCode::BadExponent);
    CHECK(code_of([] { validate_spec(ConstantSpec::trace(1.5, 3.5)); }) == ErrorCode::BadExponent);
    CHECK(code_of([] { validate_spec(ConstantSpec::friedrichs(2.0)); }) == ErrorCode::BadExponent);
    CHECK(code_of([] { validate_spec(ConstantSpec::friedrichs(0.5)); }) == ErrorCode::BadExponent);
    validate_spec(ConstantSpec::sobolev(1.0, 2.0));
    validate_spec(ConstantSpec::trace(1.5, 3.0));
    validate_spec(ConstantSpec::friedrichs(1.0));
  }
}

TEST_CASE("constant estimates are stable under refinement") {
  EstimateOptions opt;
  opt.iters = 60;
  {
    const auto spec = ConstantSpec::sobolev(1.0, 2.0);
    const double c8 = estimate_best_constant(mesh::build_cracked_mesh(unit_box(), 1.0 / 8), spec, opt).constant;
    const double c16 = estimate_best_constant(mesh::build_cracked_mesh(unit_box(), 1.0 / 16), spec, opt).constant;
    CHECK(std::abs(c8 - c16) <= 0.1 * c16);
  }
  {
    const auto spec = ConstantSpec::friedrichs(1.5);
    const auto K = unit_box({{{0.25, 0.5}, {0.75, 0.5}}});
    const double c8 = estimate_best_constant(mesh::build_cracked_mesh(K, 1.0 / 8), spec, opt).constant;
    const double c16 = estimate_best_constant(mesh::build_cracked_mesh(K, 1.0 / 16), spec, opt).constant;
    CHECK(std::isfinite(c16));
    CHECK(c16 > 0);
    CHECK(std::abs(c8 - c16) <= 0.2 * c16);
  }
}

namespace {

mesh::CrackMesh scatter_mesh(std::vector<std::vector<Point>> cracks, double h, double s) {
  geom::SceneSpec spec;
  spec.box_radius = s;
  spec.cracks = std::move(cracks);
  mesh::MeshOptions o;
  o.disk_radius = s;
  return mesh::build_cracked_mesh(geom::build_compact_set(spec), h, o);
}

}  // namespace

TEST_CASE("plane wave passes an empty scene almost untouched") {
  const auto m = scatter_mesh({}, 0.02, 3.0);
  const auto r = solve_scattering(m, {});
  CHECK(r.residual <= 1e-8);
  CHECK(lp_norm(r.us, 2) / lp_norm(r.ui, 2) <= 1e-2);
}

TEST_CASE("scattering by a symmetric crack is symmetric") {
  const auto m = scatter_mesh({{{0, -0.5}, {0, 0.5}}}, 0.05, 3.0);
  REQUIRE(m.background_size % 2 == 0);
  const auto r = solve_scattering(m, {});
  // Match triangles and corners under y -> -y through rounded coordinates.
  auto key = [](Point p) { return std::pair{std::llround(p.x * 1e6), std::llround(p.y * 1e6)}; };
  std::map<std::pair<long long, long long>, std::size_t> by_centroid;
  auto centroid = [&](std::size_t t, double sy) {
    Point c{0, 0};
    for (int v : m.triangles[t]) c = c + (1.0 / 3) * m.vertices[static_cast<std::size_t>(v)];
    return Point{c.x, sy * c.y};
  };
  for (std::size_t t = 0; t < m.triangles.size(); ++t) by_centroid[key(centroid(t, 1))] = t;
  double worst = 0, scale = 0;
  for (std::size_t t = 0; t < m.triangles.size(); ++t) {
    auto it = by_centroid.find(key(centroid(t, -1)));
    REQUIRE(it != by_centroid.end());
    const std::size_t s = it->second;
    for (int k = 0; k < 3; ++k) {
      const Point x = m.vertices[static_cast<std::size_t>(m.triangles[t][static_cast<std::size_t>(k)])];
      for (int l = 0; l < 3; ++l) {
        const Point y = m.vertices[static_cast<std::size_t>(m.triangles[s][static_cast<std::size_t>(l)])];
        if (key(x) != key({y.x, -y.y})) continue;
        worst = std::max(worst, std::abs(r.u.cat(static_cast<int>(t), k) - r.u.cat(static_cast<int>(s), l)));
      }
      scale = std::max(scale, std::abs(r.u.cat(static_cast<int>(t), k)));
    }
  }
  CHECK(worst / scale <= 1e-6);
}

TEST_CASE("scattered field agrees across two mesh levels") {
  const std::vector<std::vector<Point>> crack = {{{0, -0.5}, {0, 0.5}}};
  const auto mc = scatter_mesh(crack, 0.025, 3.0), mf = scatter_mesh(crack, 0.0125, 3.0);
  const auto coarse = solve_scattering(mc, {});
  const auto fine = solve_scattering(mf, {});
  const double a = lp_norm(coarse.us, 2), b = lp_norm(fine.us, 2);
  CHECK(std::abs(a - b) <= 0.05 * b);
}

TEST_CASE("scattering input checks") {
  ScatterConfig cfg;
  cfg.s_trunc = 1.5;  // the crack reaches radius 1, so s must exceed 2
  const auto m = scatter_mesh({{{0, -1}, {0, 1}}}, 0.1, 1.5);
  CHECK(code_of([&] { solve_scattering(m, cfg); }) == ErrorCode::BadTruncation);
}
