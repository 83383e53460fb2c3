#pragma once

#include "pcv/aggregate.hpp"
#include "pcv/encode.hpp"

#include <vector>

namespace pcv {

enum class Connectivity { Four = 4, Eight = 8 };

inline constexpr double kDefaultPeakThreshold = 4.0;

/// One instance hypothesis: a connected component of above-threshold heatmap pixels.
struct PeakRegion {
    std::vector<Pixel> pixels; ///< raster order
    double total_vote = 0.0;
    Point2 bbox_center;
    int min_row = 0, min_col = 0, max_row = 0, max_col = 0;
};

/// Maximal connected components of {q : heat(q) > threshold}, ordered by
/// their first pixel in raster order. Throws DomainError unless threshold > 0.
std::vector<PeakRegion> find_peaks(const Heatmap& heat, double threshold = kDefaultPeakThreshold,
                                   Connectivity connectivity = Connectivity::Eight);
std::vector<PeakRegion> find_peaks(const Heatmap& heat, double threshold, Connectivity connectivity,
                                   const simd::KernelTable& kernels);

} // namespace pcv
