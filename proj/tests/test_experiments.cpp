#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "mosco/classlab/checks.hpp"
#include "mosco/core/error.hpp"
#include "mosco/core/io.hpp"
#include "mosco/exp/compare.hpp"
#include "mosco/exp/experiments.hpp"
#include "mosco/exp/fixtures.hpp"
#include "mosco/pde/norms.hpp"

using namespace mosco;
using namespace mosco::exp;
using std::numbers::pi;

namespace {

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::InvalidArgument;
}

// Log-log least squares through a QR solve of [1, log x] c = log e.
std::pair<double, double> qr_fit(const std::vector<std::pair<double, double>>& pairs) {
  Eigen::MatrixXd A(pairs.size(), 2);
  Eigen::VectorXd b(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    A(static_cast<Eigen::Index>(i), 0) = 1;
    A(static_cast<Eigen::Index>(i), 1) = std::log(pairs[i].first);
    b(static_cast<Eigen::Index>(i)) = std::log(pairs[i].second);
  }
  const Eigen::VectorXd c = A.colPivHouseholderQr().solve(b);
  return {c(1), std::exp(c(0))};
}

ExperimentReport sample_report() {
  ExperimentReport r;
  r.experiment = "mosco";
  for (int n = 1; n <= 6; ++n) {
    StepRecord s;
    s.n = n;
    s.hausdorff = 0.5 / n;
    s.symdiff = 0;
    s.error = 0.3 / n;
    s.norm = 1.0 + 1.0 / 3 / n;
    s.constant = std::sqrt(2.0) * n;
    s.extra = {{"h", 1.0 / 64}, {"tag", "step"}};
    r.steps.push_back(s);
  }
  r.fitted_rate = RateFit{1.0, 0.6, 1e-17};
  r.provenance = {{"seed", 7}, {"h", 1.0 / 64}};
  r.error_label = "e_n";
  r.verdicts = recompute_verdicts(r);
  return r;
}

std::vector<std::string> lines_of(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  for (std::string l; std::getline(is, l);) out.push_back(l);
  return out;
}

MoscoInputs quick_mosco(std::vector<CompactScene> seq, CompactScene limit) {
  MoscoInputs in;
  in.sequence = std::move(seq);
  in.limit = std::move(limit);
  in.h = 1.0 / 32;
  in.params.r = 0.1;
  in.params.L = 2.0;
  in.params.M0 = 1;
  return in;
}

}  // namespace

TEST_CASE("fit_rate on exact and noisy power laws") {
  std::vector<std::pair<double, double>> exact;
  for (double x : {0.5, 0.25, 0.125, 0.0625}) exact.push_back({x, 3.0 * std::pow(x, 1.5)});
  const RateFit f = fit_rate(exact);
  CHECK(f.alpha == doctest::Approx(1.5).epsilon(1e-12));
  CHECK(f.C == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(f.residual < 1e-12);

  std::mt19937 rng(20240611);
  std::uniform_real_distribution<double> noise(0.99, 1.01);
  std::vector<std::pair<double, double>> noisy;
  for (int k = 1; k <= 8; ++k) {
    const double x = std::pow(2.0, -k);
    noisy.push_back({x, 0.7 * x * x * noise(rng)});
  }
  const RateFit g = fit_rate(noisy);
  CHECK(std::abs(g.alpha - 2.0) <= 0.05);
  const auto [alpha, C] = qr_fit(noisy);
  CHECK(g.alpha == doctest::Approx(alpha).epsilon(1e-10));
  CHECK(g.C == doctest::Approx(C).epsilon(1e-10));
  CHECK(g.residual <= 0.01);

  CHECK(code_of([] { fit_rate({{1, 1}, {2, 2}}); }) == ErrorCode::NonPositiveData);
  CHECK(code_of([] { fit_rate({{1, 1}, {2, -2}, {3, 3}}); }) == ErrorCode::NonPositiveData);
  CHECK(code_of([] { fit_rate({{0, 1}, {2, 2}, {3, 3}}); }) == ErrorCode::NonPositiveData);
  CHECK(code_of([] { fit_rate({{2, 1}, {2, 2}, {2, 3}}); }) == ErrorCode::NonPositiveData);
  CHECK(code_of([] { fit_rate({{1, 1}, {2, NAN}, {3, 3}}); }) == ErrorCode::NonPositiveData);
}

TEST_CASE("report JSON round trip") {
  const ExperimentReport r = sample_report();
  CHECK(report_from_json(report_to_json(r)) == r);
  CHECK(report_from_json(nlohmann::json::parse(report_to_json(r).dump())) == r);
  ExperimentReport bare = r;
  bare.fitted_rate.reset();
  CHECK(report_from_json(report_to_json(bare)) == bare);
}

TEST_CASE("report CSV and plot script") {
  const ExperimentReport r = sample_report();
  const std::string csv = report_csv(r);
  const auto ls = lines_of(csv);
  std::size_t comments = 0;
  while (comments < ls.size() && ls[comments].starts_with("#")) ++comments;
  REQUIRE(ls.size() == comments + 7);
  CHECK(ls[comments] == "n,hausdorff,symdiff,error,norm,constant");
  for (std::size_t i = 0; i < 6; ++i) {
    std::istringstream row(ls[comments + 1 + i]);
    std::vector<double> v;
    for (std::string cell; std::getline(row, cell, ',');) v.push_back(std::stod(cell));
    REQUIRE(v.size() == 6);
    const StepRecord& s = r.steps[i];
    CHECK(v[0] == s.n);
    CHECK(v[1] == s.hausdorff);
    CHECK(v[3] == s.error);
    CHECK(v[4] == s.norm);
    CHECK(v[5] == s.constant);  // %.17g round-trips exactly
  }
  CHECK(report_csv(r) == csv);

  ExperimentReport empty = r;
  empty.steps.clear();
  const auto le = lines_of(report_csv(empty));
  REQUIRE(le.size() == comments + 1);
  CHECK(le.back() == "n,hausdorff,symdiff,error,norm,constant");

  const std::string gp = plot_script(r, "run.csv");
  CHECK(gp.find("run.csv") != std::string::npos);
  CHECK(gp.find("logscale y") != std::string::npos);

  const auto dir = std::filesystem::temp_directory_path() / "mosco_report_test";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  write_report(r, dir.string(), "run");
  CHECK(read_text_file((dir / "run.csv").string()) == csv);
  CHECK(read_text_file((dir / "run.gp").string()) == plot_script(r, "run.csv"));
  CHECK(report_from_json(nlohmann::json::parse(read_text_file((dir / "run.json").string()))) == r);
  const std::string first = read_text_file((dir / "run.csv").string());
  emit_plot_data(r, dir.string(), "run");
  CHECK(read_text_file((dir / "run.csv").string()) == first);
  std::filesystem::remove_all(dir);
}

TEST_CASE("verdict rules") {
  ExperimentReport r = sample_report();
  for (const auto& v : r.verdicts) {
    CHECK(v.passed);
    CHECK(v.criterion == "3");
    CHECK(!v.rule.empty());
  }
  std::swap(r.steps[2].error, r.steps[3].error);
  const auto bad = recompute_verdicts(r);
  CHECK(!bad[0].passed);
  CHECK(bad[1].passed);

  ExperimentReport s;
  s.experiment = "sieve-critical";
  for (int n = 1; n <= 3; ++n) s.steps.push_back({n, 0, 0, 0.1, 0.2, 1.0, {{"class_status", "FAIL"}}});
  auto v = recompute_verdicts(s);
  REQUIRE(v.size() == 2);
  CHECK(v[0].passed);
  CHECK(v[1].passed);
  s.steps[1].error = 0.049;
  s.steps[2].extra["class_status"] = "UNKNOWN";
  v = recompute_verdicts(s);
  CHECK(!v[0].passed);
  CHECK(!v[1].passed);

  ExperimentReport u;
  u.experiment = "uniform-bounds";
  u.steps.push_back({1, 0, 0, 0, 5.0, 0, {}});
  CHECK(recompute_verdicts(u)[0].passed);  // a family of one has ratio 1
  u.steps.push_back({2, 0, 0, 0, 51.0, 0, {}});
  CHECK(!recompute_verdicts(u)[0].passed);
}

TEST_CASE("config hash") {
  const nlohmann::json a = {{"h", 0.5}, {"n", 3}};
  const nlohmann::json b = {{"n", 3}, {"h", 0.5}};
  CHECK(config_hash(a) == config_hash(b));
  CHECK(config_hash(a).size() == 16);
  CHECK(config_hash(a) != config_hash({{"h", 0.25}, {"n", 3}}));
}

TEST_CASE("grid difference of identical fields vanishes") {
  const auto sc = rotated_crack(0.3);
  const auto m = mesh::build_cracked_mesh(sc, 1.0 / 16);
  const auto u = pde::FeField::interpolate(m, [](Point x) { return 1 + x.x * x.y; });
  const auto d = grid_difference(u, u, {});
  CHECK(d.joint == 0.0);
  CHECK(d.compared == static_cast<int>(m.triangles.size()));
  // Against zero the difference is the W^{1,2} norm of the field.
  const auto z = grid_difference(u, pde::FeField::constant(m, 0.0), {});
  CHECK(z.joint == doctest::Approx(pde::w1p_norm(u, 2)).epsilon(1e-12));
}

TEST_CASE("mosco run on a constant sequence has zero error") {
  const auto lim = rotated_crack(0.0);
  const auto rep = run_mosco(quick_mosco({lim, lim, lim}, lim));
  REQUIRE(rep.steps.size() == 3);
  for (const auto& s : rep.steps) {
    CHECK(s.error == 0.0);
    CHECK(s.hausdorff == 0.0);
    CHECK(s.symdiff == 0.0);
    CHECK(s.norm > 0);
  }
  CHECK(!rep.fitted_rate);
  for (std::size_t i = 0; i < rep.steps.size(); ++i) CHECK(rep.steps[i].n == static_cast<int>(i + 1));
}

TEST_CASE("mosco run on a growing crack") {
  // Cracks [-1/2, -1/2 + len] x {0} growing to the full unit crack.
  auto crack = [](double len) {
    geom::SceneSpec s;
    s.box_radius = 1;
    s.cracks = {{{-0.5, 0}, {-0.5 + len, 0}}};
    return geom::build_compact_set(s);
  };
  std::vector<CompactScene> seq;
  for (int n = 1; n <= 4; ++n) seq.push_back(crack(1.0 - 0.5 / n));
  auto in = quick_mosco(seq, crack(1.0));
  in.source = {1, 0, 1, {0, 0}};  // a load even in x2 would not feel a horizontal crack
  const auto rep = run_mosco(in);
  for (std::size_t i = 1; i < rep.steps.size(); ++i) {
    CHECK(rep.steps[i].error < rep.steps[i - 1].error);
    CHECK(rep.steps[i].hausdorff < rep.steps[i - 1].hausdorff);
  }
  REQUIRE(rep.fitted_rate);
  CHECK(rep.fitted_rate->alpha > 0);
}

TEST_CASE("mosco run rejects scenes outside the class") {
  auto in = quick_mosco({exp::plus_sign_arms(pi / 2)}, rotated_crack(0.0, 1.0, 1.5));
  in.sequence[0] = rotated_crack(0.0, 1.0, 1.5);
  in.params.r = 0.1;
  in.params.L = 1.0 + 1e-9;
  // A sawtooth crack cannot be a graph with L close to 1.
  geom::SceneSpec s;
  s.box_radius = 1.5;
  s.cracks = {{{-0.5, 0}, {-0.4, 0.1}, {-0.3, 0}, {-0.2, 0.1}, {-0.1, 0}}};
  in.sequence.push_back(geom::build_compact_set(s));
  CHECK(code_of([&] { run_mosco(in); }) == ErrorCode::ClassCheckFailed);
  in.sequence = {};
  CHECK(code_of([&] { run_mosco(in); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("sieve scenes") {
  double w = 0, hm = 0;
  const auto sc = sieve_scene(3, 0.1, 0.5, &w, &hm);
  CHECK(sc.cracks.size() == 4);
  CHECK(w == doctest::Approx(0.1).epsilon(0.25));
  CHECK(hm <= 0.1 / 4);
  // Gaps between consecutive pieces all have the rounded width.
  for (std::size_t i = 0; i + 1 < sc.cracks.size(); ++i)
    CHECK(sc.cracks[i + 1].pts.front().x - sc.cracks[i].pts.back().x == doctest::Approx(w).epsilon(1e-12));
  CHECK(sc.cracks.front().pts.front().x == -0.5);
  CHECK(sc.cracks.back().pts.back().x == 0.5);

  classlab::Piece piece;
  for (std::size_t i = 0; i < sc.cracks.size(); ++i) piece.arcs.push_back({static_cast<int>(i), 0.0, 1.0});
  const auto fr = classlab::check_fr(sc, piece, 1.0, 1.0, 8);
  REQUIRE(fr.verdict.failed());
  CHECK(fr.verdict.witnesses[0].condition == "FR.separation");
  CHECK(fr.verdict.witnesses[0].value == doctest::Approx(w).epsilon(1e-9));

  auto in = default_sieve_inputs(SieveRegime::WIDE);
  CHECK(sieve_gap(in, 2) == 0.25);
  in.regime = SieveRegime::TINY;
  CHECK(sieve_gap(in, 2) == 1.0 / 32);
  in.regime = SieveRegime::CRITICAL;
  in.c = 3;
  CHECK(sieve_gap(in, 1) == std::exp(-3.0));
  CHECK(code_of([] { sieve_scene(2, 0.6, 0.5); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("one wide sieve gap is closer to the uncut box") {
  auto in = default_sieve_inputs(SieveRegime::WIDE);
  in.n_list = {1};
  const auto rep = run_sieve(in);
  REQUIRE(rep.steps.size() == 1);
  CHECK(rep.steps[0].norm < rep.steps[0].error);
  CHECK(rep.steps[0].extra["class_status"] == "FAIL");
}

TEST_CASE("tiny sieve gaps approach the fully cut box") {
  auto in = default_sieve_inputs(SieveRegime::TINY);
  in.n_list = {1, 2, 3};
  const auto rep = run_sieve(in);
  for (std::size_t i = 1; i < rep.steps.size(); ++i) CHECK(rep.steps[i].error < rep.steps[i - 1].error);
}

TEST_CASE("sobolev run on a repeated scene gives identical constants") {
  const auto seg = exp::segment_scene({0, 0}, {1, 0});
  SobolevInputs in;
  SobolevMember m{"seg", seg, classlab::trivial_decomposition(seg, false), "linear", classlab::Modulus::linear(1.0, 0.5)};
  in.members = {m, m};
  in.h = 1.0 / 8;
  in.estimate.iters = 30;
  in.estimate.seed = 3;
  const auto rep = run_sobolev_uniformity(in);
  REQUIRE(rep.steps.size() == 2);
  CHECK(rep.steps[0].constant == rep.steps[1].constant);
  CHECK(rep.steps[0].constant > 0);
  CHECK(recompute_verdicts(rep)[0].passed);
  in.members[0].family = "other";
  CHECK(code_of([&] { run_sobolev_uniformity(in); }) == ErrorCode::InvalidArgument);
}

TEST_CASE("scattering stability on a constant sequence and a converging wavenumber") {
  ScatterStabilityInputs in = rotating_scatter_inputs(1);
  in.h = 0.05;
  in.sequence = {in.limit, in.limit};
  const auto zero = run_scattering_stability(in);
  for (const auto& s : zero.steps) {
    CHECK(s.error == 0.0);
    CHECK(s.norm > 0);
  }

  in.check_class = false;
  in.sequence.clear();
  for (int n = 1; n <= 4; ++n) {
    ScatterCase c = in.limit;
    c.cfg.k = 2.0 + 1.0 / n;
    c.cfg.d = {std::cos(0.5 / n), std::sin(0.5 / n)};
    in.sequence.push_back(c);
  }
  const auto rep = run_scattering_stability(in);
  for (std::size_t i = 1; i < rep.steps.size(); ++i) CHECK(rep.steps[i].error < rep.steps[i - 1].error);
}

TEST_CASE("uniform bounds decay exponent matches an independent band fit") {
  auto in = default_uniform_bounds_inputs();
  in.members.resize(1);
  in.members[0].cfg.k = 2.0;
  in.h = 0.05;
  std::vector<std::pair<double, double>> oracle_pairs;
  in.sink = [&](const pde::FeField& u, const std::string&) {
    const auto& m = *u.mesh;
    const auto& cfg = in.members[0].cfg;
    const double r0 = pde::scene_radius(in.members[0].scene) + 0.5, r1 = cfg.s_trunc - 2 * in.h;
    std::vector<double> sq(6, 0.0);
    std::vector<int> cnt(6, 0);
    for (int d = 0; d < m.ndofs(); ++d) {
      const Point x = m.dof_point(d);
      const double rho = geom::norm(x);
      if (rho < r0 || rho >= r1) continue;
      const std::complex<double> ui = std::exp(std::complex<double>(0, cfg.k * (x.x * cfg.d.x + x.y * cfg.d.y)));
      const double a = std::abs(u.cvalues[static_cast<std::size_t>(d)] - ui);
      const int b = std::min(5, static_cast<int>((rho - r0) / ((r1 - r0) / 6)));
      sq[static_cast<std::size_t>(b)] += a * a;
      ++cnt[static_cast<std::size_t>(b)];
    }
    for (int b = 0; b < 6; ++b)
      oracle_pairs.push_back({r0 + (b + 0.5) * (r1 - r0) / 6, std::sqrt(sq[static_cast<std::size_t>(b)] / cnt[static_cast<std::size_t>(b)])});
  };
  const auto rep = run_uniform_bounds(in);
  REQUIRE(rep.steps.size() == 1);
  REQUIRE(oracle_pairs.size() == 6);
  const auto [alpha, C] = qr_fit(oracle_pairs);
  CHECK(rep.steps[0].extra["decay_exponent"].get<double>() == doctest::Approx(-alpha).epsilon(1e-6));
  CHECK(rep.verdicts[0].passed);
  CHECK(rep.steps[0].norm > 0);
}

TEST_CASE("experiment reruns are byte identical") {
  const auto in = quick_mosco({rotated_crack(pi / 4), rotated_crack(pi / 8)}, rotated_crack(0.0));
  CHECK(report_csv(run_mosco(in)) == report_csv(run_mosco(in)));
  const auto a = report_to_json(run_mosco(in)).dump();
  CHECK(a == report_to_json(run_mosco(in)).dump());
}
