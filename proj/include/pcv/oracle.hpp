#pragma once

#include "pcv/encode.hpp"
#include "pcv/metrics.hpp"
#include "pcv/pipeline.hpp"

namespace pcv {

/// Probability 1 on each pixel's target cell or abstention; ignored targets abstain.
VoteTensor one_hot_votes(const LabelField& labels);

struct OracleResult {
    LabelField labels;
    InferResult inference;
    PQStats stats; ///< against the working-resolution ground truth
};

/// Runs inference on ground-truth labels of an annotation already at working resolution.
OracleResult oracle_run(const PanopticAnnotation& working, const FilterPair& filters,
                        const CategoryTable& categories, const InferOptions& options = {});

/// Convenience form building the filters from a spec.
OracleResult oracle_run(const PanopticAnnotation& working, const GridSpec& grid, const CategoryTable& categories,
                        double threshold = kDefaultPeakThreshold, int top_k = kDefaultTopK);

} // namespace pcv
