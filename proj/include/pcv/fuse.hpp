#pragma once

#include "pcv/backproject.hpp"
#include "pcv/panoptic.hpp"

#include <optional>
#include <set>

namespace pcv {

inline constexpr std::int64_t kCocoMinStuffArea = 4096;
inline constexpr std::int64_t kCityscapesMinStuffArea = 2048;

/// Majority thing category under the mask; ties go to the lower category id.
/// nullopt (reject) when no mask pixel carries a thing category.
std::optional<CategoryId> assign_category(const InstanceMask& mask, const Plane<CategoryId>& semantic,
                                          const std::set<CategoryId>& thing_categories);

struct FuseOptions {
    /// Stuff segments smaller than this (measured at full resolution) become void.
    std::int64_t min_stuff_area = kCocoMinStuffArea;
    /// Full resolution / working resolution; areas are multiplied by its square.
    int scale = 4;
};

/// Builds the panoptic output from disjoint masks and the semantic map.
///
/// Accepted masks become thing segments with ids 1, 2, ... in mask order.
/// Every other pixel joins the whole-category stuff segment of its semantic
/// label; pixels labelled void or with a thing category are void. Stuff
/// segments follow the things, ordered by category, and are dropped to void
/// when below the area threshold.
PanopticMap fuse(const std::vector<InstanceMask>& masks, const Plane<CategoryId>& semantic,
                 const CategoryTable& categories, const FuseOptions& options = {});

} // namespace pcv
