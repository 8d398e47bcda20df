/**
 * @file fixtures.hpp
 * @brief Named geometric fixtures shared by tests, the acceptance runner and the CLI.
 */
#pragma once

#include <string>
#include <vector>

#include "mosco/classlab/types.hpp"
#include "mosco/geom/scene.hpp"

namespace mosco::exp {

using geom::CompactScene;
using geom::Point;

CompactScene segment_scene(Point a = {0, 0}, Point b = {1, 0}, double box = 1.5);
/// Unit circle as a closed polygon with n vertices.
CompactScene circle_scene(int n = 256, double radius = 1.0, double box = 1.5);
/// Four unit arms from the origin at angles 0, theta, pi, pi + theta (one polyline each).
CompactScene plus_sign_arms(double theta);
/// The same set as two full segments through the origin.
CompactScene plus_sign_segments(double theta);
/// Segment (0,0)-(1,0) and the parabola (t, beta t^2), 0 <= t <= 1/sqrt(beta),
/// sampled geometrically towards the tangency point.
CompactScene tangent_pair(double beta);
/// Unit-circle arc from angle 1/n to 2 pi (ends at (1,0)).
CompactScene pacman(double n, int vertices = 256);
/// Right-angle polyline (0,0)-(1,0)-(1,1).
CompactScene l_shape();

struct ClassFixture {
  std::string name;
  CompactScene scene;
  classlab::Decomposition witness;
  classlab::ClassParams params;  ///< r, L, M0 for FR pieces; omega for gluing
  bool gluing = false;           ///< check gluing with anchor BDRY and params.omega
  bool g_class = false;
  classlab::ConeSpec cone;
};

/// Twelve scenes: segment, L-shape, plus-signs at 90/60/30 degrees, tangent
/// parabolas beta in {1, 4, 16, 64}, pac-man n in {4, 16}, circle.
std::vector<ClassFixture> class_fixture_suite();

}  // namespace mosco::exp
