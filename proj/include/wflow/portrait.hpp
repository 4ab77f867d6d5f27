#pragma once

#include <string>

#include "wflow/io.hpp"
#include "wflow/space.hpp"

namespace wflow {

/// Phase-portrait bundle: every named curve of the plane, the singular and
/// special points, the tangency point, and a lattice of sample
/// trajectories, serialized for plotting.
struct PortraitSpec {
    SpaceParams space;
    double w1_lo = 0.05, w1_hi = 12.0;
    double w2_lo = 0.05, w2_hi = 12.0;
    int curve_samples = 600;
    int traj_per_axis = 4;        // lattice of trajectory starts (0: none)
    double horizon = 40.0;
    bool simplex = false;         // also emit unit-volume simplex coordinates
};

json build_portrait(const PortraitSpec& spec);

/// Render a bundle produced by build_portrait to a standalone SVG image
/// (fixed 1000 x 1000 viewport, axes clipped to the spec window).
std::string render_svg(const json& bundle);

}  // namespace wflow
