#pragma once

// Segment-normalized cross entropy.
//
// Each pixel i is weighted by w_i = a_i^-lambda where a_i is the area of its
// segment, and the loss is the weighted mean of -log p(y_i):
//
//   L = sum_i w_i * (-log p_i) / sum_i w_i
//
// lambda = 0 is the plain pixel mean; lambda = 1 gives every segment the same
// total weight. Pixels with weight 0 (unlabeled, or ignored for voting) drop
// out of both sums.

#include "pcv/aggregate.hpp"
#include "pcv/encode.hpp"
#include "pcv/panoptic.hpp"

#include <span>

namespace pcv {

struct SegmentWeights {
    Plane<double> w;
    double lambda = 0.0;
};

/// Throws DomainError unless 0 <= lambda <= 1. Unlabeled pixels get weight 0.
SegmentWeights segment_weights(const PanopticAnnotation& ann, double lambda);

/// Copy of `weights` with pixels whose vote target is ignored set to 0.
SegmentWeights without_ignored_votes(SegmentWeights weights, const LabelField& labels);

/// Weighted mean negative log-probability. `probs` holds p(y_i) per pixel in
/// raster order. Throws DomainError when the total weight is zero or a
/// weighted probability is outside (0, 1].
double normalized_loss(std::span<const double> probs, const SegmentWeights& weights);

/// Probability the tensor assigns to each pixel's vote target (1 where ignored).
Plane<double> target_probabilities(const VoteTensor& votes, const LabelField& labels);

/// Probability of each pixel's semantic label under a per-category probability
/// tensor laid out like a VoteTensor, whose channel c is category `channel_category[c]`.
Plane<double> semantic_probabilities(const VoteTensor& semantic_probs, std::span<const CategoryId> channel_category,
                                     const LabelField& labels);

} // namespace pcv
