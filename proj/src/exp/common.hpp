/**
 * @file common.hpp
 * @brief Helpers shared by the experiment drivers.
 */
#pragma once

#include <string>

#include "mosco/classlab/checks.hpp"
#include "mosco/exp/experiments.hpp"
#include "mosco/mesh/crackmesh.hpp"

namespace mosco::exp::detail {

/// Checks every crack of the scene as its own single-arc FR piece; ClassCheckFailed unless all PASS.
void require_fr_pieces(const CompactScene& s, const classlab::ClassParams& p, const std::string& what);

/// Requested crack segments of a scene (for excluding cut triangles).
std::vector<geom::Segment> crack_segments(const CompactScene& s);

nlohmann::json params_json(const classlab::ClassParams& p);

/// Copy of the scene with an origin-centred box of the given radius.
CompactScene rebox(CompactScene s, double radius);

}  // namespace mosco::exp::detail
