/**
 * @file mosco_run.cpp
 * @brief Neumann solutions on a converging sequence of cracked domains.
 */
#include <cmath>
#include <numbers>

#include "common.hpp"
#include "mosco/core/error.hpp"
#include "mosco/exp/compare.hpp"
#include "mosco/geom/measure.hpp"
#include "mosco/pde/norms.hpp"

namespace mosco::exp {

MoscoInputs rotating_crack_inputs(int n_max) {
  MoscoInputs in;
  for (int n = 1; n <= n_max; ++n) in.sequence.push_back(rotated_crack(std::numbers::pi / (4 * n)));
  in.limit = rotated_crack(0.0);
  in.params.r = 0.1;
  in.params.L = 2.0;
  in.params.M0 = 1;
  return in;
}

namespace {

mesh::CrackMesh build_mesh(const CompactScene& s, double h, const std::string& what) {
  try {
    return mesh::build_cracked_mesh(s, h);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::SceneTooFine) fail(ErrorCode::MeshFailure, what + ": " + e.what());
    throw;
  }
}

}  // namespace

ExperimentReport run_mosco(const MoscoInputs& in) {
  if (in.sequence.empty()) fail(ErrorCode::InvalidArgument, "empty scene sequence");
  for (const auto& s : in.sequence)
    if (s.box_center != in.limit.box_center || s.box_radius != in.limit.box_radius)
      fail(ErrorCode::InvalidArgument, "all scenes must share the limit scene's box");
  if (in.check_class) {
    detail::require_fr_pieces(in.limit, in.params, "limit scene");
    for (std::size_t i = 0; i < in.sequence.size(); ++i)
      detail::require_fr_pieces(in.sequence[i], in.params, "scene " + std::to_string(i + 1));
  }

  pde::NeumannOptions nopt;
  nopt.tol = in.tol;
  nopt.exec = in.exec;
  const auto src = in.source.data();
  const auto mlim = build_mesh(in.limit, in.h, "limit scene");
  const auto ulim = pde::solve_neumann(mlim, in.p, src, nopt);
  if (ulim.status != pde::SolveStatus::Converged) fail(ErrorCode::NoConvergence, "limit solve did not converge");
  if (in.sink) in.sink(ulim.u, "limit");

  ExperimentReport rep;
  rep.experiment = "mosco";
  rep.error_label = "||(u_n - u, grad u_n - grad u)||_Lp";
  rep.norm_label = "||(u_n, grad u_n)||_Lp";
  rep.constant_label = "unused";
  const auto lim_cut = detail::crack_segments(in.limit);
  const double R = in.limit.box_radius;
  for (std::size_t i = 0; i < in.sequence.size(); ++i) {
    const auto& s = in.sequence[i];
    const auto m = build_mesh(s, in.h, "scene " + std::to_string(i + 1));
    const auto r = pde::solve_neumann(m, in.p, src, nopt);
    if (r.status != pde::SolveStatus::Converged) fail(ErrorCode::NoConvergence, "solve did not converge at step " + std::to_string(i + 1));
    if (in.sink) in.sink(r.u, "step " + std::to_string(i + 1));

    CompareOptions co;
    co.p = in.p;
    co.cut = detail::crack_segments(s);
    co.cut.insert(co.cut.end(), lim_cut.begin(), lim_cut.end());
    const auto d = grid_difference(r.u, ulim.u, co);

    StepRecord st;
    st.n = static_cast<int>(i + 1);
    st.hausdorff = geom::hausdorff_complementary_distance(s, in.limit, R, 1e-4).value;
    st.symdiff = geom::symmetric_difference_area(s, in.limit, in.h / 4, in.exec).value;
    st.error = d.joint;
    // ||(u, grad u)||_{L^p}: the same functional against the zero field.
    const auto zero = pde::FeField::constant(m, 0.0);
    CompareOptions cz;
    cz.p = in.p;
    st.norm = grid_difference(r.u, zero, cz).joint;
    st.extra = {{"h", m.h},
                {"snap_error", m.snap_error},
                {"excluded_area", d.excluded_area},
                {"value_error", d.value},
                {"gradient_error", d.gradient},
                {"dofs", m.ndofs()},
                {"newton_steps", r.newton_steps}};
    rep.steps.push_back(std::move(st));
  }

  std::vector<std::pair<double, double>> pairs;
  for (const auto& s : rep.steps)
    if (s.hausdorff > 0 && s.error > 0) pairs.push_back({s.hausdorff, s.error});
  if (pairs.size() == rep.steps.size() && pairs.size() >= 3) rep.fitted_rate = fit_rate(pairs);

  rep.provenance = {{"p", in.p},
                    {"h", in.h},
                    {"tol", in.tol},
                    {"source", in.source.to_json()},
                    {"class_params", detail::params_json(in.params)},
                    {"limit_snap_error", mlim.snap_error},
                    {"steps", in.sequence.size()}};
  rep.verdicts = recompute_verdicts(rep);
  return rep;
}

}  // namespace mosco::exp
