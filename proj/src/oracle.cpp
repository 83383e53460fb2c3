#include "pcv/oracle.hpp"

namespace pcv {

VoteTensor one_hot_votes(const LabelField& labels)
{
    const int h = labels.vote.height();
    const int w = labels.vote.width();
    VoteTensor votes(h, w, labels.abstention + 1);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const int target = labels.vote(y, x);
            votes(y, x, target == kIgnoreVote ? labels.abstention : target) = 1.0;
        }
    }
    return votes;
}

OracleResult oracle_run(const PanopticAnnotation& working, const FilterPair& filters,
                        const CategoryTable& categories, const InferOptions& options)
{
    OracleResult out;
    out.labels = encode_labels(working, filters.voting);
    const VoteTensor votes = one_hot_votes(out.labels);
    out.inference = infer(votes, out.labels.semantic, filters, categories, options);
    out.stats = evaluate(out.inference.panoptic, to_panoptic_map(working), categories);
    return out;
}

OracleResult oracle_run(const PanopticAnnotation& working, const GridSpec& grid, const CategoryTable& categories,
                        double threshold, int top_k)
{
    InferOptions options;
    options.threshold = threshold;
    options.top_k = top_k;
    return oracle_run(working, FilterPair(grid), categories, options);
}

} // namespace pcv
