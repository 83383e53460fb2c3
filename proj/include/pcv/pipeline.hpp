#pragma once

// Inference from per-pixel vote distributions and a semantic map:
// aggregate -> peaks -> top votes -> backproject -> fuse.

#include "pcv/backproject.hpp"
#include "pcv/fuse.hpp"
#include "pcv/grid.hpp"
#include "pcv/peaks.hpp"

namespace pcv {

struct InferOptions {
    double threshold = kDefaultPeakThreshold;
    int top_k = kDefaultTopK;
    Connectivity connectivity = Connectivity::Eight;
    FuseOptions fuse;
};

/// Voting and query filters built once and shared between images.
struct FilterPair {
    CellTable voting;
    CellTable query;

    explicit FilterPair(const GridSpec& spec) : voting(build_grid(spec)), query(invert_grid(voting)) {}
};

struct InferResult {
    Heatmap heat;
    std::vector<PeakRegion> peaks;
    std::vector<InstanceMask> masks;
    PanopticMap panoptic;
};

InferResult infer(const VoteTensor& votes, const Plane<CategoryId>& semantic, const FilterPair& filters,
                  const CategoryTable& categories, const InferOptions& options = {});

} // namespace pcv
