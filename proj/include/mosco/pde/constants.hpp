/**
 * @file constants.hpp
 * @brief Lower bounds on Sobolev, trace and Friedrichs constants of a cracked mesh.
 *
 * The ratio for the chosen inequality is maximized over the P1 space by
 * normalized gradient ascent from a constant start, seeded random tents and
 * any caller-supplied fields. The best ratio seen is a lower bound on the
 * discrete constant.
 */
#pragma once

#include <cstdint>
#include <vector>

#include "mosco/pde/fields.hpp"

namespace mosco::pde {

enum class ConstantMode { SOBOLEV, TRACE, FRIEDRICHS };

/// SOBOLEV(p, q): ||u||_q / ||u||_{W^{1,p}}
/// TRACE(p, s): || |u|^+ ||_{L^s(boundary)} / ||u||_{W^{1,p}}
/// FRIEDRICHS(p): ||u||_{p*} / (||grad u||_p + || |u|^+ ||_{L^s(boundary)}), p* and s from SobolevExponents.
struct ConstantSpec {
  ConstantMode mode = ConstantMode::SOBOLEV;
  double p = 1.0;
  double exponent = 2.0;  // q for SOBOLEV, s for TRACE; ignored for FRIEDRICHS

  static ConstantSpec sobolev(double p, double q) { return {ConstantMode::SOBOLEV, p, q}; }
  static ConstantSpec trace(double p, double s) { return {ConstantMode::TRACE, p, s}; }
  static ConstantSpec friedrichs(double p) { return {ConstantMode::FRIEDRICHS, p, 0.0}; }
};

/// Throws BadExponent for inadmissible combinations.
void validate_spec(const ConstantSpec& spec);

/// The ratio at one field (0 for the zero field).
double constant_ratio(const FeField& u, const ConstantSpec& spec);

struct EstimateOptions {
  int iters = 200;  // ascent steps per start
  std::uint64_t seed = 1;
  int restarts = 6;    // ascent runs from the best screened tents
  int screen = 256;    // random tents whose ratio is evaluated before choosing the restarts
  std::vector<FeField> warm_starts;
};

struct ConstantEstimate {
  double constant = 0;
  FeField maximizer;
  bool converged = true;  // false: some start hit the iteration cap (best so far is returned)
  int evaluations = 0;
};

ConstantEstimate estimate_best_constant(const CrackMesh& m, const ConstantSpec& spec, const EstimateOptions& opt = {});

}  // namespace mosco::pde
