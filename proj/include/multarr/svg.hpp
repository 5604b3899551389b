#ifndef MULTARR_SVG_HPP
#define MULTARR_SVG_HPP

#include <optional>
#include <string>

#include "multarr/arrangement.hpp"

namespace multarr {

struct Viewport {
    mpq_class xmin, ymin, xmax, ymax;
};

/// Deconing picture of a central 3-arrangement over Q: intersect with the
/// affine chart {deconing coordinate = 1} and draw the other hyperplanes as
/// lines; intersection points lying on >= 3 lines are marked. Pure function
/// of (arrangement, pivot, viewport): coordinates are computed exactly and
/// formatted deterministically, so output is byte-identical across runs.
/// Default viewport: bounding box of the intersection points, padded 20%.
std::string decone_svg(const Multiarrangement& E, const Hyperplane& h0,
                       std::optional<Viewport> viewport = std::nullopt);

} // namespace multarr

#endif
