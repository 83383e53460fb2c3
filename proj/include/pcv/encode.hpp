#pragma once

#include "pcv/grid.hpp"
#include "pcv/panoptic.hpp"

#include <map>
#include <span>

namespace pcv {

/// Vote label for thing pixels whose centroid lies outside the filter window.
inline constexpr int kIgnoreVote = -1;

struct Point2 {
    double row = 0.0;
    double col = 0.0;

    friend bool operator==(const Point2&, const Point2&) = default;
};

/// Per-pixel targets a perfect network would output.
struct LabelField {
    Plane<CategoryId> semantic;           ///< kVoidCategory on unlabeled pixels
    Plane<int> vote;                      ///< cell index, abstention (== K), or kIgnoreVote
    std::map<SegmentId, Point2> centroids; ///< thing segments only
    int abstention = 0;                   ///< the abstention class, equal to K
};

/// Arithmetic mean of the pixel coordinates. Throws DomainError on an empty mask.
Point2 centroid(std::span<const Pixel> mask);

/// Nearest pixel to a real position, ties rounded away from zero.
Pixel round_to_pixel(Point2 p);

/// Builds semantic and voting targets for an annotation at working resolution.
LabelField encode_labels(const PanopticAnnotation& ann, const CellTable& vf);

} // namespace pcv
