/**
 * @file moscolab.cpp
 * @brief Command-line runner: one JSON config, one command, reports written atomically.
 *
 * Exit codes: 0 success (every verdict passed), 1 a verdict failed,
 * 2 invalid input, 3 solver non-convergence.
 */
#include <omp.h>
#include <spdlog/spdlog.h>

#include <CLI11.hpp>
#include <filesystem>
#include <functional>
#include <map>
#include <numbers>
#include <optional>

#include "mosco/classlab/checks.hpp"
#include "mosco/core/error.hpp"
#include "mosco/core/io.hpp"
#include "mosco/exp/experiments.hpp"
#include "mosco/geom/measure.hpp"
#include "mosco/geom/scene_io.hpp"
#include "mosco/mesh/crackmesh.hpp"
#include "mosco/pde/neumann.hpp"
#include "mosco/pde/norms.hpp"
#include "mosco/pde/scattering.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace mosco;

namespace {

enum Exit { OK = 0, VERDICT_FAILED = 1, INVALID = 2, NO_CONVERGENCE = 3 };

struct Run {
  json cfg;
  fs::path base;  // directory of the config; relative paths resolve against it
  fs::path out;
  std::optional<std::uint64_t> seed;
  std::string command;

  template <class T>
  T get(const char* key, T fallback) const {
    if (!cfg.contains(key)) return fallback;
    try {
      return cfg.at(key).get<T>();
    } catch (const json::exception& e) {
      fail(ErrorCode::MalformedSpec, std::string("config key '") + key + "': " + e.what());
    }
  }

  std::string path_of(const std::string& p) const { return fs::path(p).is_absolute() ? p : (base / p).string(); }

  /// A scene is a file path or an inline scene object.
  geom::CompactScene scene(const json& j) const {
    if (j.is_string()) return geom::load_scene(path_of(j.get<std::string>()));
    if (j.is_object()) return geom::scene_from_json(j);
    fail(ErrorCode::MalformedSpec, "scene must be a path or an object");
  }
  geom::CompactScene scene(const char* key) const {
    if (!cfg.contains(key)) fail(ErrorCode::MalformedSpec, std::string("missing '") + key + "'");
    return scene(cfg.at(key));
  }

  classlab::Decomposition decomposition(const json& j, const geom::CompactScene& s) const {
    if (j.is_null() || j == "trivial") return classlab::trivial_decomposition(s, false);
    if (j == "single") return classlab::trivial_decomposition(s, true);
    if (j.is_string()) return classlab::load_decomposition(path_of(j.get<std::string>()));
    return classlab::decomposition_from_json(j);
  }

  classlab::ClassParams params(classlab::ClassParams fallback) const {
    if (!cfg.contains("params")) return fallback;
    json merged = classlab::params_to_json(fallback);
    merged.update(cfg.at("params"));
    return classlab::params_from_json(merged);
  }

  std::string file(const std::string& ext) const { return (out / (command + ext)).string(); }

  std::uint64_t required_seed() const {
    if (seed) return *seed;
    if (cfg.contains("seed")) return get<std::uint64_t>("seed", 0);
    fail(ErrorCode::MalformedSpec, "this command needs an explicit seed (config 'seed' or --seed)");
  }
};

pde::ScatterConfig scatter_config(const json& j, pde::ScatterConfig c = {}) {
  if (j.contains("k")) c.k = j.at("k").get<double>();
  if (j.contains("d")) c.d = geom::point_from_json(j.at("d"));
  if (j.contains("s_trunc")) c.s_trunc = j.at("s_trunc").get<double>();
  if (j.contains("k_lo")) c.k_lo = j.at("k_lo").get<double>();
  if (j.contains("k_hi")) c.k_hi = j.at("k_hi").get<double>();
  return c;
}

int finish(const Run& r, const exp::ExperimentReport& rep) {
  exp::ExperimentReport out = rep;
  out.provenance["config_hash"] = exp::config_hash(r.cfg);
  out.provenance["command"] = r.command;
  exp::write_report(out, r.out.string(), r.command);
  for (const auto& v : out.verdicts)
    spdlog::info("{} [criterion {}]: {} ({})", v.name, v.criterion, v.passed ? "PASS" : "FAIL", v.rule);
  return out.all_passed() ? OK : VERDICT_FAILED;
}

void write_json(const Run& r, json j) {
  j["command"] = r.command;
  j["config_hash"] = exp::config_hash(r.cfg);
  write_file_atomic(r.file(".json"), j.dump(2) + "\n");
}

// ---------------------------------------------------------------------------

int check_class(const Run& r) {
  using namespace classlab;
  const auto sc = r.scene("scene");
  const auto dec = r.decomposition(r.cfg.value("decomposition", json()), sc);
  const auto p = r.params({});
  const std::string check = r.get<std::string>("check", "fr");
  CheckOptions opt;
  opt.tol = r.get<double>("tol", opt.tol);
  json res;
  Verdict v;
  if (check == "fr") {
    std::vector<Status> st;
    json pieces = json::array();
    for (const auto& pc : dec.pieces) {
      const auto f = check_fr(sc, pc, p.r, p.L, p.M0, opt);
      st.push_back(f.verdict.status);
      pieces.push_back(verdict_to_json(f.verdict));
      for (const auto& w : f.verdict.witnesses) v.witnesses.push_back(w);
    }
    const bool any_fail = std::find(st.begin(), st.end(), Status::FAIL) != st.end();
    const bool all_pass = std::all_of(st.begin(), st.end(), [](Status s) { return s == Status::PASS; });
    v.status = any_fail ? Status::FAIL : all_pass ? Status::PASS : Status::UNKNOWN;
    res["pieces"] = pieces;
  } else if (check == "gluing") {
    const Anchor anchor = r.get<std::string>("anchor", "BDRY") == "SING" ? Anchor::SING : Anchor::BDRY;
    const auto g = check_gluing(sc, dec, anchor, p.omega, opt);
    v = g.verdict;
    res["measured_a"] = g.measured_a;
  } else if (check == "exterior") {
    ExteriorOptions eo;
    eo.tol = r.get<double>("tol", eo.tol);
    v = check_exterior_connectedness(sc, p.gamma, r.get<std::vector<double>>("t_samples", {0.1, 0.3}), eo);
  } else {
    fail(ErrorCode::MalformedSpec, "check must be fr, gluing or exterior");
  }
  res["check"] = check;
  res["verdict"] = verdict_to_json(v);
  res["params"] = params_to_json(p);
  write_json(r, res);
  spdlog::info("{} check: {}", check, to_string(v.status));
  return v.failed() ? VERDICT_FAILED : OK;
}

int hausdorff(const Run& r) {
  const auto a = r.scene("scene_a"), b = r.scene("scene_b");
  const double tol = r.get<double>("tol", 1e-4);
  const std::string mode = r.get<std::string>("mode", "sets");
  geom::CertifiedScalar d;
  if (mode == "sets")
    d = geom::hausdorff_distance(a, b, tol);
  else if (mode == "complementary")
    d = geom::hausdorff_complementary_distance(a, b, r.get<double>("outer_radius", a.box_radius), tol);
  else
    fail(ErrorCode::MalformedSpec, "mode must be sets or complementary");
  write_json(r, {{"mode", mode}, {"value", d.value}, {"error_bound", d.error_bound}, {"tol", tol}});
  spdlog::info("d_H = {} +- {}", d.value, d.error_bound);
  return OK;
}

int solve_neumann(const Run& r) {
  const auto sc = r.scene("scene");
  const auto m = mesh::build_cracked_mesh(sc, r.get<double>("h", 1.0 / 32));
  const double p = r.get<double>("p", 2.0);
  const auto src = r.cfg.contains("source") ? exp::LinearSource::from_json(r.cfg.at("source")) : exp::LinearSource{};
  pde::NeumannOptions o;
  o.tol = r.get<double>("tol", o.tol);
  o.max_iter = r.get<int>("max_iter", o.max_iter);
  const auto res = pde::solve_neumann(m, p, src.data(), o);
  pde::save_field(r.file(".field"), res.u);
  const bool ok = res.status == pde::SolveStatus::Converged;
  write_json(r, {{"p", p},
                 {"h", m.h},
                 {"dofs", m.ndofs()},
                 {"converged", ok},
                 {"residual", res.residual},
                 {"newton_steps", res.newton_steps},
                 {"lp_norm", pde::lp_norm(res.u, p)},
                 {"grad_lp_norm", pde::grad_lp_norm(res.u, p)},
                 {"source", src.to_json()}});
  if (!ok) spdlog::error("Neumann solve did not converge (residual {})", res.residual);
  return ok ? OK : NO_CONVERGENCE;
}

int scatter_solve(const Run& r) {
  const auto cfg = scatter_config(r.cfg);
  geom::CompactScene sc = r.scene("scene");
  sc.box_center = {0, 0};
  sc.box_radius = cfg.s_trunc;
  mesh::MeshOptions mo;
  mo.disk_radius = cfg.s_trunc;
  const auto m = mesh::build_cracked_mesh(sc, r.get<double>("h", 0.025), mo);
  const auto res = pde::solve_scattering(m, cfg);
  pde::save_field(r.file(".field"), res.u);
  write_json(r, {{"k", cfg.k},
                 {"d", geom::point_to_json(cfg.d)},
                 {"s_trunc", cfg.s_trunc},
                 {"h", m.h},
                 {"dofs", m.ndofs()},
                 {"residual", res.residual},
                 {"u_l2", pde::lp_norm(res.u, 2)},
                 {"grad_u_l2", pde::grad_lp_norm(res.u, 2)},
                 {"us_l2", pde::lp_norm(res.us, 2)},
                 {"ui_l2", pde::lp_norm(res.ui, 2)}});
  return OK;
}

int mosco_run(const Run& r) {
  exp::MoscoInputs in;
  if (r.cfg.contains("scenes")) {
    for (const auto& s : r.cfg.at("scenes")) in.sequence.push_back(r.scene(s));
    in.limit = r.scene("limit");
  } else {
    in = exp::rotating_crack_inputs(r.get<int>("n_max", 6));
  }
  in.p = r.get<double>("p", in.p);
  in.h = r.get<double>("h", in.h);
  in.tol = r.get<double>("tol", in.tol);
  if (r.cfg.contains("source")) in.source = exp::LinearSource::from_json(r.cfg.at("source"));
  in.params = r.params(in.params);
  in.check_class = r.get<bool>("check_class", true);
  return finish(r, exp::run_mosco(in));
}

int sieve_run(const Run& r) {
  static const std::map<std::string, exp::SieveRegime> regimes{
      {"wide", exp::SieveRegime::WIDE}, {"tiny", exp::SieveRegime::TINY}, {"critical", exp::SieveRegime::CRITICAL}};
  const auto it = regimes.find(r.get<std::string>("regime", ""));
  if (it == regimes.end()) fail(ErrorCode::MalformedSpec, "regime must be wide, tiny or critical");
  auto in = exp::default_sieve_inputs(it->second);
  in.n_list = r.get<std::vector<int>>("n_list", in.n_list);
  in.c = r.get<double>("c", in.c);
  in.p = r.get<double>("p", in.p);
  in.h = r.get<double>("h", in.h);
  in.box = r.get<double>("box", in.box);
  in.grade = r.get<double>("grade", in.grade);
  in.tol = r.get<double>("tol", in.tol);
  if (r.cfg.contains("source")) in.source = exp::LinearSource::from_json(r.cfg.at("source"));
  in.params = r.params(in.params);
  json cal = nullptr;
  if (in.regime == exp::SieveRegime::CRITICAL && r.cfg.contains("calibrate")) {
    const auto c = exp::calibrate_critical_sieve(in, r.get<std::vector<double>>("calibrate", {}));
    in.c = c.c;
    cal = {{"c", c.c}, {"candidates", c.candidates}, {"margins", c.margins}};
    spdlog::info("calibrated c = {}", c.c);
  }
  auto rep = exp::run_sieve(in);
  rep.provenance["calibration"] = cal;
  return finish(r, rep);
}

int sobolev_run(const Run& r) {
  exp::SobolevInputs in;
  if (r.cfg.contains("members")) {
    for (const auto& m : r.cfg.at("members")) {
      const auto sc = r.scene(m.at("scene"));
      in.members.push_back({m.value("name", "member"), sc, r.decomposition(m.value("decomposition", json()), sc),
                            m.value("family", "linear"), classlab::Modulus::from_json(m.at("omega"))});
    }
  } else {
    in = exp::default_sobolev_inputs();
  }
  in.p = r.get<double>("p", in.p);
  in.q = r.get<double>("q", in.q);
  in.h = r.get<double>("h", in.h);
  in.check_class = r.get<bool>("check_class", true);
  in.estimate.iters = r.get<int>("iters", in.estimate.iters);
  in.estimate.restarts = r.get<int>("restarts", in.estimate.restarts);
  in.estimate.screen = r.get<int>("screen", in.estimate.screen);
  in.estimate.seed = r.required_seed();
  return finish(r, exp::run_sobolev_uniformity(in));
}

int scatter_stability(const Run& r) {
  exp::ScatterStabilityInputs in;
  if (r.cfg.contains("scenes")) {
    const auto cfg = scatter_config(r.cfg);
    for (const auto& s : r.cfg.at("scenes")) in.sequence.push_back({r.scene(s), cfg});
    in.limit = {r.scene("limit"), cfg};
    in.params = r.params(in.params);
  } else {
    in = exp::rotating_scatter_inputs(r.get<int>("n_max", 6));
    in.params = r.params(in.params);
  }
  in.h = r.get<double>("h", in.h);
  in.check_class = r.get<bool>("check_class", true);
  return finish(r, exp::run_scattering_stability(in));
}

int uniform_bounds(const Run& r) {
  exp::UniformBoundsInputs in;
  if (r.cfg.contains("members")) {
    for (const auto& m : r.cfg.at("members"))
      in.members.push_back({m.value("name", "member"), r.scene(m.at("scene")), scatter_config(m)});
  } else {
    in = exp::default_uniform_bounds_inputs();
  }
  in.params = r.params(in.params);
  in.h = r.get<double>("h", in.h);
  in.s_report = r.get<double>("s_report", in.s_report);
  in.check_class = r.get<bool>("check_class", true);
  return finish(r, exp::run_uniform_bounds(in));
}

const std::map<std::string, std::function<int(const Run&)>>& commands() {
  static const std::map<std::string, std::function<int(const Run&)>> c{
      {"check-class", check_class},     {"hausdorff", hausdorff},         {"solve-neumann", solve_neumann},
      {"scatter-solve", scatter_solve}, {"mosco-run", mosco_run},         {"sieve-run", sieve_run},
      {"sobolev-run", sobolev_run},     {"scatter-stability", scatter_stability}, {"uniform-bounds", uniform_bounds}};
  return c;
}

int exit_code(ErrorCode c) {
  return c == ErrorCode::NoConvergence || c == ErrorCode::NonConvergence ? NO_CONVERGENCE : INVALID;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cracked-domain class checks, solvers and stability experiments"};
  std::string config, out = "out", log_level = "info";
  std::optional<std::uint64_t> seed;
  int threads = 0;
  app.add_option("--config", config, "JSON run configuration")->required();
  app.add_option("--out", out, "output directory");
  app.add_option("--seed", seed, "seed for randomized estimators (overrides the config)");
  app.add_option("--threads", threads, "OpenMP threads (0 = runtime default)");
  app.add_option("--log-level", log_level, "trace, debug, info, warn, error or off");
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? OK : INVALID;
  }
  spdlog::set_level(spdlog::level::from_str(log_level));
  if (threads > 0) omp_set_num_threads(threads);

  Run run;
  try {
    run.cfg = json::parse(read_text_file(config));
    if (!run.cfg.is_object()) fail(ErrorCode::MalformedSpec, "config must be a JSON object");
    run.base = fs::absolute(config).parent_path();
    run.out = out;
    run.seed = seed;
    run.command = run.cfg.value("command", "");
    const auto it = commands().find(run.command);
    if (it == commands().end()) fail(ErrorCode::MalformedSpec, "unknown command '" + run.command + "'");
    spdlog::debug("running {} from {}", run.command, config);
    return it->second(run);
  } catch (const Error& e) {
    spdlog::error("{}", e.what());
    return exit_code(e.code());
  } catch (const json::exception& e) {
    spdlog::error("MalformedSpec: {}", e.what());
    return INVALID;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return INVALID;
  }
}
