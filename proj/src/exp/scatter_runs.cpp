/**
 * @file scatter_runs.cpp
 * @brief Scattering stability along a crack sequence and uniform bounds over a family.
 */
#include <algorithm>
#include <cmath>
#include <numbers>

#include "common.hpp"
#include "mosco/core/error.hpp"
#include "mosco/exp/compare.hpp"
#include "mosco/exp/fixtures.hpp"
#include "mosco/geom/measure.hpp"
#include "mosco/pde/norms.hpp"

namespace mosco::exp {

namespace {

constexpr double kTrunc = 3.0;

mesh::CrackMesh disk_mesh(const CompactScene& s, double h, double radius, const std::string& what) {
  mesh::MeshOptions o;
  o.disk_radius = radius;
  try {
    return mesh::build_cracked_mesh(s, h, o);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::SceneTooFine) fail(ErrorCode::MeshFailure, what + ": " + e.what());
    throw;
  }
}

void require_sc(const CompactScene& s, const classlab::ClassParams& p, const std::string& what) {
  detail::require_fr_pieces(s, p, what);
  classlab::ExteriorOptions eo;
  eo.tol = 1e-2;
  const auto v = classlab::check_exterior_connectedness(s, p.gamma, {0.1, 0.3}, eo);
  if (v.failed()) fail(ErrorCode::ClassCheckFailed, what + ": exterior is not uniformly connected");
}

pde::ScatterResult solve(const mesh::CrackMesh& m, const pde::ScatterConfig& cfg, const std::string& what) {
  if (cfg.s_trunc != m.disk_radius) fail(ErrorCode::InvalidArgument, what + ": s_trunc must match the mesh disk");
  return pde::solve_scattering(m, cfg);
}

}  // namespace

ScatterStabilityInputs rotating_scatter_inputs(int n_max) {
  ScatterStabilityInputs in;
  for (int n = 1; n <= n_max; ++n) in.sequence.push_back({rotated_crack(1.0 / n, 1.0, kTrunc), {}});
  in.limit = {rotated_crack(0.0, 1.0, kTrunc), {}};
  in.params.r = 0.1;
  in.params.L = 2.0;
  in.params.M0 = 1;
  return in;
}

ExperimentReport run_scattering_stability(const ScatterStabilityInputs& in) {
  if (in.sequence.empty()) fail(ErrorCode::InvalidArgument, "empty scene sequence");
  const double s = in.limit.cfg.s_trunc;
  for (const auto& c : in.sequence)
    if (c.cfg.s_trunc != s) fail(ErrorCode::InvalidArgument, "all cases must share s_trunc");
  const auto limit_scene = detail::rebox(in.limit.scene, s);
  if (in.check_class) {
    require_sc(limit_scene, in.params, "limit scene");
    for (std::size_t i = 0; i < in.sequence.size(); ++i)
      require_sc(detail::rebox(in.sequence[i].scene, s), in.params, "scene " + std::to_string(i + 1));
  }

  const auto mlim = disk_mesh(limit_scene, in.h, s, "limit scene");
  const auto ulim = solve(mlim, in.limit.cfg, "limit scene");
  if (in.sink) in.sink(ulim.u, "limit");

  ExperimentReport rep;
  rep.experiment = "scatter-stability";
  rep.error_label = "E_n = ||u_n - u||_L2 + ||S_n grad u_n - S grad u||_L2";
  rep.norm_label = "B_n = ||u_n||_L2 + ||grad u_n||_L2";
  rep.constant_label = "unused";
  const auto lim_cut = detail::crack_segments(limit_scene);
  for (std::size_t i = 0; i < in.sequence.size(); ++i) {
    const auto& c = in.sequence[i];
    const std::string what = "scene " + std::to_string(i + 1);
    const auto sc = detail::rebox(c.scene, s);
    const auto m = disk_mesh(sc, in.h, s, what);
    const auto r = solve(m, c.cfg, what);
    if (in.sink) in.sink(r.u, "step " + std::to_string(i + 1));

    CompareOptions co;
    co.cut = detail::crack_segments(sc);
    co.cut.insert(co.cut.end(), lim_cut.begin(), lim_cut.end());
    if (c.cfg.coeff.sigma) co.sigma_a = c.cfg.coeff.sigma;
    if (in.limit.cfg.coeff.sigma) co.sigma_b = in.limit.cfg.coeff.sigma;
    const auto d = grid_difference(r.u, ulim.u, co);

    StepRecord st;
    st.n = static_cast<int>(i + 1);
    st.hausdorff = geom::hausdorff_complementary_distance(sc, limit_scene, s, 1e-4).value;
    st.symdiff = 0;
    st.error = d.value + d.gradient;
    st.norm = pde::lp_norm(r.u, 2) + pde::grad_lp_norm(r.u, 2);
    st.extra = {{"k", c.cfg.k},
                {"d", {c.cfg.d.x, c.cfg.d.y}},
                {"value_error", d.value},
                {"gradient_error", d.gradient},
                {"excluded_area", d.excluded_area},
                {"residual", r.residual},
                {"dofs", m.ndofs()}};
    rep.steps.push_back(std::move(st));
  }

  std::vector<std::pair<double, double>> pairs;
  for (const auto& st : rep.steps)
    if (st.hausdorff > 0 && st.error > 0) pairs.push_back({st.hausdorff, st.error});
  if (pairs.size() == rep.steps.size() && pairs.size() >= 3) rep.fitted_rate = fit_rate(pairs);

  rep.provenance = {{"h", in.h},
                    {"s_trunc", s},
                    {"k", in.limit.cfg.k},
                    {"d", {in.limit.cfg.d.x, in.limit.cfg.d.y}},
                    {"class_params", detail::params_json(in.params)},
                    {"steps", in.sequence.size()}};
  rep.verdicts = recompute_verdicts(rep);
  return rep;
}

UniformBoundsInputs default_uniform_bounds_inputs() {
  UniformBoundsInputs in;
  auto add = [&](std::string name, const CompactScene& sc, double k, double dir) {
    pde::ScatterConfig cfg;
    cfg.k = k;
    cfg.d = {std::cos(dir), std::sin(dir)};
    cfg.s_trunc = kTrunc;
    in.members.push_back({std::move(name), detail::rebox(sc, kTrunc), cfg});
  };
  const double pi = std::numbers::pi;
  add("crack_0", rotated_crack(0.0, 1.0, kTrunc), 1.0, 0.0);
  add("crack_30", rotated_crack(pi / 6, 1.0, kTrunc), 1.25, 0.0);
  add("crack_60", rotated_crack(pi / 3, 1.0, kTrunc), 1.5, pi / 4);
  add("crack_90", rotated_crack(pi / 2, 1.0, kTrunc), 2.0, 0.0);
  add("shift_x", rotated_crack(0.3, 1.0, kTrunc, {0.5, 0}), 1.0, pi / 2);
  add("shift_y", rotated_crack(1.0, 1.0, kTrunc, {0, -0.5}), 1.5, 0.0);
  add("shift_xy", rotated_crack(2.0, 0.8, kTrunc, {-0.4, 0.3}), 2.0, pi / 3);
  add("plus_90", plus_sign_arms(pi / 2), 1.0, 0.0);
  add("plus_60", plus_sign_arms(pi / 3), 1.5, pi / 6);
  add("plus_30", plus_sign_arms(pi / 6), 2.0, 0.0);
  in.params.r = 0.1;
  in.params.L = 2.0;
  in.params.M0 = 1;
  return in;
}

ExperimentReport run_uniform_bounds(const UniformBoundsInputs& in) {
  if (in.members.empty()) fail(ErrorCode::InvalidArgument, "empty family");
  ExperimentReport rep;
  rep.experiment = "uniform-bounds";
  rep.error_label = "unused";
  rep.norm_label = "||u||_L2(B_s) + ||grad u||_L2(B_s)";
  rep.constant_label = "max |u_s| on the annulus";
  int n = 0;
  for (const auto& mem : in.members) {
    const double s = mem.cfg.s_trunc;
    if (!(in.s_report > 0 && in.s_report <= s)) fail(ErrorCode::InvalidArgument, "s_report must lie in (0, s_trunc]");
    const auto sc = detail::rebox(mem.scene, s);
    if (in.check_class) require_sc(sc, in.params, mem.name);
    const auto m = disk_mesh(sc, in.h, s, mem.name);
    const auto r = solve(m, mem.cfg, mem.name);
    if (in.sink) in.sink(r.u, "uniform " + mem.name);

    std::vector<char> region(m.triangles.size(), 0);
    for (std::size_t t = 0; t < m.triangles.size(); ++t) {
      Point c{0, 0};
      for (int v : m.triangles[t]) c = c + (1.0 / 3) * m.vertices[static_cast<std::size_t>(v)];
      region[t] = geom::norm(c) <= in.s_report ? 1 : 0;
    }

    // RMS and max of |u_s| over nodes in annular bands between the scene and the truncation circle.
    const double r0 = pde::scene_radius(sc) + 0.5, r1 = s - 2 * in.h;
    constexpr int kBands = 6;
    std::vector<double> band_sq(kBands, 0.0), band_max(kBands, 0.0);
    std::vector<int> band_count(kBands, 0);
    const double bw = (r1 - r0) / kBands;
    if (bw > 0) {
      for (int dof = 0; dof < m.ndofs(); ++dof) {
        const double rho = geom::norm(m.dof_point(dof));
        if (rho < r0 || rho >= r1) continue;
        const auto b = static_cast<std::size_t>(std::min(kBands - 1, static_cast<int>((rho - r0) / bw)));
        const double a = std::abs(r.us.cvalues[static_cast<std::size_t>(dof)]);
        band_sq[b] += a * a;
        band_max[b] = std::max(band_max[b], a);
        ++band_count[b];
      }
    }
    std::vector<std::pair<double, double>> pairs;
    for (int b = 0; b < kBands; ++b)
      if (band_sq[static_cast<std::size_t>(b)] > 0)
        pairs.push_back({r0 + (b + 0.5) * bw, std::sqrt(band_sq[static_cast<std::size_t>(b)] / band_count[static_cast<std::size_t>(b)])});
    nlohmann::json decay = nullptr, amplitude = nullptr;
    if (pairs.size() >= 3) {
      const auto f = fit_rate(pairs);
      decay = -f.alpha;
      amplitude = f.C;
    }

    StepRecord st;
    st.n = ++n;
    st.norm = pde::lp_norm(r.u, 2, &region) + pde::grad_lp_norm(r.u, 2, &region);
    st.constant = *std::max_element(band_max.begin(), band_max.end());
    st.extra = {{"name", mem.name},
                {"k", mem.cfg.k},
                {"d", {mem.cfg.d.x, mem.cfg.d.y}},
                {"decay_exponent", decay},
                {"decay_amplitude", amplitude},
                {"annulus", {r0, r1}},
                {"residual", r.residual},
                {"dofs", m.ndofs()}};
    rep.steps.push_back(std::move(st));
  }
  rep.provenance = {{"h", in.h}, {"s_report", in.s_report}, {"class_params", detail::params_json(in.params)}};
  rep.verdicts = recompute_verdicts(rep);
  return rep;
}

}  // namespace mosco::exp
