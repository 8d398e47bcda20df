/**
 * @file sobolev.cpp
 * @brief Estimated embedding constants over a linearly glued family and a cusp family.
 */
#include <cmath>
#include <numbers>

#include "common.hpp"
#include "mosco/core/error.hpp"
#include "mosco/exp/fixtures.hpp"

namespace mosco::exp {

SobolevInputs default_sobolev_inputs() {
  SobolevInputs in;
  for (int deg : {90, 60, 30}) {
    const double th = deg * std::numbers::pi / 180;
    const auto sc = plus_sign_arms(th);
    in.members.push_back({"plus_" + std::to_string(deg), sc, classlab::trivial_decomposition(sc, false), "linear",
                          classlab::Modulus::linear(std::sin(th), 0.5)});
  }
  for (double beta : {1.0, 4.0, 16.0, 64.0}) {
    const auto sc = tangent_pair(beta);
    in.members.push_back({"tangent_" + std::to_string(static_cast<int>(beta)), sc, classlab::trivial_decomposition(sc, false),
                          "cusp", classlab::Modulus::quadratic(0.5)});
  }
  return in;
}

namespace {

void check_member(const SobolevMember& m) {
  using classlab::Anchor;
  const auto g = classlab::check_gluing(m.scene, m.decomposition, Anchor::BDRY, m.omega);
  if (!g.verdict.pass())
    fail(ErrorCode::ClassCheckFailed, m.name + ": gluing check is " + classlab::to_string(g.verdict.status));
  if (m.family == "cusp") {
    // The contrast family must not be linearly glued: a = 1 on delta <= 1/2 has to FAIL.
    // The tolerance sits below the smallest violation a^2/(4 beta) for beta <= 64.
    classlab::CheckOptions opt;
    opt.tol = 1.0 / 1024;
    const auto lin = classlab::check_gluing(m.scene, m.decomposition, Anchor::BDRY, classlab::Modulus::linear(1.0, 0.5), opt);
    if (!lin.verdict.failed()) fail(ErrorCode::ClassCheckFailed, m.name + ": cusp member passes linear gluing");
  }
}

}  // namespace

ExperimentReport run_sobolev_uniformity(const SobolevInputs& in) {
  if (in.members.empty()) fail(ErrorCode::InvalidArgument, "empty family");
  const auto spec = pde::ConstantSpec::sobolev(in.p, in.q);
  pde::validate_spec(spec);
  ExperimentReport rep;
  rep.experiment = "sobolev";
  rep.error_label = "unused";
  rep.norm_label = "unused";
  rep.constant_label = "estimated SOBOLEV(p,q) constant";
  int n = 0;
  for (const auto& m : in.members) {
    if (m.family != "linear" && m.family != "cusp") fail(ErrorCode::InvalidArgument, "family must be linear or cusp");
    if (in.check_class) check_member(m);
    const auto mesh = mesh::build_cracked_mesh(m.scene, in.h);
    const auto est = pde::estimate_best_constant(mesh, spec, in.estimate);
    if (in.sink) in.sink(est.maximizer, "sobolev " + m.name);
    StepRecord st;
    st.n = ++n;
    st.constant = est.constant;
    st.extra = {{"name", m.name},
                {"family", m.family},
                {"h", mesh.h},
                {"dofs", mesh.ndofs()},
                {"snap_error", mesh.snap_error},
                {"converged", est.converged},
                {"evaluations", est.evaluations}};
    rep.steps.push_back(std::move(st));
  }
  rep.provenance = {{"p", in.p},
                    {"q", in.q},
                    {"h", in.h},
                    {"seed", in.estimate.seed},
                    {"iters", in.estimate.iters},
                    {"restarts", in.estimate.restarts},
                    {"screen", in.estimate.screen}};
  rep.verdicts = recompute_verdicts(rep);
  return rep;
}

}  // namespace mosco::exp
