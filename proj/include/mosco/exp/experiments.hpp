/**
 * @file experiments.hpp
 * @brief Domain-perturbation, sieve, embedding-constant and scattering experiments.
 *
 * Every run returns an ExperimentReport whose verdicts come from
 * recompute_verdicts, so they can be re-derived from the saved step table.
 */
#pragma once

#include <functional>
#include <string>
#include <vector>

#include "mosco/classlab/types.hpp"
#include "mosco/core/kernels.hpp"
#include "mosco/exp/report.hpp"
#include "mosco/pde/constants.hpp"
#include "mosco/pde/neumann.hpp"
#include "mosco/pde/scattering.hpp"

namespace mosco::exp {

using geom::CompactScene;
using geom::Point;

/// Called with every solution field while its mesh is alive (tag names the step).
using FieldSink = std::function<void(const pde::FeField&, const std::string& tag)>;

/// f(x) = c0 + c1 x1 + c2 x2 and a constant vector load F.
struct LinearSource {
  double c0 = 1, c1 = 0, c2 = 0;
  Point F{0, 0};
  pde::SourceData data() const;
  nlohmann::json to_json() const;
  static LinearSource from_json(const nlohmann::json& j);
};

/// Straight crack of the given length centred at the origin, at angle `angle` to the x1-axis.
CompactScene rotated_crack(double angle, double length = 1.0, double box = 1.0, Point center = {0, 0});

// ---------------------------------------------------------------------------
// Neumann stability under domain perturbation

struct MoscoInputs {
  std::vector<CompactScene> sequence;
  CompactScene limit;
  double p = 2.0;
  LinearSource source{1, 1, 0, {0, 0}};
  double h = 1.0 / 64;
  double tol = 1e-10;
  classlab::ClassParams params;  // r, L, M0 for the per-crack FR check
  bool check_class = true;
  kernels::Exec exec = kernels::Exec::Parallel;
  FieldSink sink;
};

/// Crack of length 1 at angle pi/(4n), n = 1..n_max, and its horizontal limit.
MoscoInputs rotating_crack_inputs(int n_max = 6);

/// Steps: hausdorff = d_H of the complements, symdiff = |D_n Δ D|,
/// error = ||(u_n - u, grad u_n - grad u)||_{L^p}, norm = ||(u_n, grad u_n)||_{L^p}.
/// Fit: error against hausdorff when every value is positive.
ExperimentReport run_mosco(const MoscoInputs& in);

// ---------------------------------------------------------------------------
// Neumann sieve

enum class SieveRegime { WIDE, TINY, CRITICAL };

struct SieveInputs {
  SieveRegime regime = SieveRegime::WIDE;
  std::vector<int> n_list{1, 2, 3, 4, 5, 6};
  double c = 2.0;  // CRITICAL: gap(n) = exp(-c n) / n
  double p = 2.0;
  LinearSource source{1, 0, 1, {0, 0}};
  double box = 0.5;      // square [-box, box]^2, sieve on x2 = 0
  double h = 1.0 / 32;   // background spacing
  double grade = 0.5;    // mesh grading factor towards the gap ends
  double tol = 1e-7;     // Neumann residual tolerance (graded meshes have tiny element loads)
  classlab::ClassParams params;  // FR check of the sieve as one piece
  kernels::Exec exec = kernels::Exec::Parallel;
  FieldSink sink;
};

SieveInputs default_sieve_inputs(SieveRegime regime);
double sieve_gap(const SieveInputs& in, int n);
/// The line x2 = 0 across the box with n gaps of (dyadically rounded) width gap centred at
/// the midpoints of n equal cells. Returns the scene; the rounded width goes to *width.
CompactScene sieve_scene(int n, double gap, double box, double* width = nullptr, double* hmin = nullptr);

/// Steps: error = g_full(n) = ||u_n - u_full||_{L^2}, norm = g_empty(n) = ||u_n - u_empty||_{L^2},
/// constant = ||u_full||_{L^2}, hausdorff = d_H of the complements of D_n and the fully cut box.
ExperimentReport run_sieve(const SieveInputs& in);

struct SieveCalibration {
  double c = 0;
  std::vector<double> candidates;
  std::vector<double> margins;  // min_n min(g_full, g_empty) / ||u_full|| per candidate
};
/// Sweeps c over the candidates and keeps the one with the largest margin.
SieveCalibration calibrate_critical_sieve(const SieveInputs& base, const std::vector<double>& candidates);

// ---------------------------------------------------------------------------
// Embedding constants over scene families

struct SobolevMember {
  std::string name;
  CompactScene scene;
  classlab::Decomposition decomposition;
  std::string family;  // "linear": must pass linear gluing; "cusp": must pass only quadratic gluing
  classlab::Modulus omega;
};

struct SobolevInputs {
  std::vector<SobolevMember> members;
  double p = 1.0, q = 2.0;
  double h = 1.0 / 16;
  pde::EstimateOptions estimate;
  bool check_class = true;
  FieldSink sink;
};

/// Plus signs at 90, 60, 30 degrees and tangent parabolas beta = 1, 4, 16, 64.
SobolevInputs default_sobolev_inputs();

/// Steps: constant = estimated SOBOLEV(p, q) constant; extra.family, extra.name.
ExperimentReport run_sobolev_uniformity(const SobolevInputs& in);

// ---------------------------------------------------------------------------
// Scattering

struct ScatterCase {
  CompactScene scene;
  pde::ScatterConfig cfg;
};

struct ScatterStabilityInputs {
  std::vector<ScatterCase> sequence;
  ScatterCase limit;
  double h = 0.025;
  classlab::ClassParams params;
  bool check_class = true;
  FieldSink sink;
};

/// Crack of length 1 through the origin at angle 1/n, n = 1..n_max, limit horizontal; k = 2, d = (1, 0).
ScatterStabilityInputs rotating_scatter_inputs(int n_max = 6);

/// Steps: error = E_n = ||u_n - u||_{L^2} + ||sqrt(sigma_n) grad u_n - sqrt(sigma) grad u||_{L^2},
/// norm = ||u_n||_{L^2} + ||grad u_n||_{L^2}.
ExperimentReport run_scattering_stability(const ScatterStabilityInputs& in);

struct BoundsMember {
  std::string name;
  CompactScene scene;
  pde::ScatterConfig cfg;
};

struct UniformBoundsInputs {
  std::vector<BoundsMember> members;
  double h = 0.025;
  double s_report = 2.0;
  classlab::ClassParams params;
  bool check_class = true;
  FieldSink sink;
};

/// Ten members: rotated and translated cracks and plus signs, k in [1, 2].
UniformBoundsInputs default_uniform_bounds_inputs();

/// Steps: norm = ||u||_{L^2(B_s \ K)} + ||grad u||_{L^2(B_s \ K)} with s = s_report;
/// extra.decay_exponent: -alpha of a fit of max |u_s| over annuli against the radius.
ExperimentReport run_uniform_bounds(const UniformBoundsInputs& in);

}  // namespace mosco::exp
