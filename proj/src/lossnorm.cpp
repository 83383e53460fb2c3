#include "pcv/lossnorm.hpp"

#include "pcv/error.hpp"

#include <cmath>
#include <map>

namespace pcv {

SegmentWeights segment_weights(const PanopticAnnotation& ann, double lambda)
{
    if (!(lambda >= 0.0 && lambda <= 1.0)) {
        throw DomainError("lambda must lie in [0, 1]");
    }
    std::map<SegmentId, std::int64_t> area;
    for (SegmentId id : ann.ids.values()) {
        if (id != 0) {
            ++area[id];
        }
    }
    std::map<SegmentId, double> weight;
    for (const auto& [id, a] : area) {
        weight[id] = std::pow(static_cast<double>(a), -lambda);
    }
    SegmentWeights out{Plane<double>(ann.height(), ann.width(), 0.0), lambda};
    for (int y = 0; y < ann.height(); ++y) {
        for (int x = 0; x < ann.width(); ++x) {
            const SegmentId id = ann.ids(y, x);
            if (id != 0) {
                out.w(y, x) = weight.at(id);
            }
        }
    }
    return out;
}

SegmentWeights without_ignored_votes(SegmentWeights weights, const LabelField& labels)
{
    for (int y = 0; y < weights.w.height(); ++y) {
        for (int x = 0; x < weights.w.width(); ++x) {
            if (labels.vote(y, x) == kIgnoreVote) {
                weights.w(y, x) = 0.0;
            }
        }
    }
    return weights;
}

namespace {

// Neumaier summation keeps the 1e-12 comparisons against closed forms honest.
class CompensatedSum {
public:
    void add(double v) noexcept
    {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v)) {
            carry_ += (sum_ - t) + v;
        } else {
            carry_ += (v - t) + sum_;
        }
        sum_ = t;
    }
    double value() const noexcept { return sum_ + carry_; }

private:
    double sum_ = 0.0;
    double carry_ = 0.0;
};

} // namespace

double normalized_loss(std::span<const double> probs, const SegmentWeights& weights)
{
    if (probs.size() != weights.w.size()) {
        throw ShapeError("probability count does not match the weight map");
    }
    CompensatedSum num;
    CompensatedSum den;
    const auto w = weights.w.values();
    for (std::size_t i = 0; i < probs.size(); ++i) {
        if (w[i] == 0.0) {
            continue;
        }
        if (!(probs[i] > 0.0 && probs[i] <= 1.0)) {
            throw DomainError("probability " + std::to_string(probs[i]) + " outside (0, 1]");
        }
        num.add(-w[i] * std::log(probs[i]));
        den.add(w[i]);
    }
    if (den.value() <= 0.0) {
        throw DomainError("total loss weight is zero");
    }
    return num.value() / den.value();
}

Plane<double> target_probabilities(const VoteTensor& votes, const LabelField& labels)
{
    if (votes.height() != labels.vote.height() || votes.width() != labels.vote.width() ||
        votes.channels() != labels.abstention + 1) {
        throw ShapeError("vote tensor does not match the label field");
    }
    Plane<double> out(votes.height(), votes.width(), 1.0);
    for (int y = 0; y < votes.height(); ++y) {
        for (int x = 0; x < votes.width(); ++x) {
            const int target = labels.vote(y, x);
            if (target != kIgnoreVote) {
                out(y, x) = votes(y, x, target);
            }
        }
    }
    return out;
}

Plane<double> semantic_probabilities(const VoteTensor& semantic_probs, std::span<const CategoryId> channel_category,
                                     const LabelField& labels)
{
    if (semantic_probs.height() != labels.semantic.height() || semantic_probs.width() != labels.semantic.width() ||
        static_cast<std::size_t>(semantic_probs.channels()) != channel_category.size()) {
        throw ShapeError("semantic tensor does not match the label field");
    }
    std::map<CategoryId, int> channel_of;
    for (std::size_t c = 0; c < channel_category.size(); ++c) {
        channel_of[channel_category[c]] = static_cast<int>(c);
    }
    Plane<double> out(semantic_probs.height(), semantic_probs.width(), 1.0);
    for (int y = 0; y < out.height(); ++y) {
        for (int x = 0; x < out.width(); ++x) {
            const CategoryId c = labels.semantic(y, x);
            if (c == kVoidCategory) {
                continue;
            }
            auto it = channel_of.find(c);
            if (it == channel_of.end()) {
                throw ShapeError("category " + std::to_string(c) + " has no channel");
            }
            out(y, x) = semantic_probs(y, x, it->second);
        }
    }
    return out;
}

} // namespace pcv
