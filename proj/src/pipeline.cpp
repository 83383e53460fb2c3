#include "pcv/pipeline.hpp"

#include "pcv/error.hpp"

namespace pcv {

InferResult infer(const VoteTensor& votes, const Plane<CategoryId>& semantic, const FilterPair& filters,
                  const CategoryTable& categories, const InferOptions& options)
{
    if (semantic.height() != votes.height() || semantic.width() != votes.width()) {
        throw ShapeError("semantic map and vote tensor differ in size");
    }
    InferResult out;
    out.heat = aggregate_votes(votes, filters.voting);
    out.peaks = find_peaks(out.heat, options.threshold, options.connectivity);
    const TopVotes top = top_votes(votes, options.top_k);
    out.masks = backproject(out.peaks, top, filters.query);
    out.panoptic = fuse(out.masks, semantic, categories, options.fuse);
    return out;
}

} // namespace pcv
