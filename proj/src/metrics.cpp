#include "pcv/metrics.hpp"

#include "pcv/error.hpp"

#include <cassert>
#include <set>

namespace pcv {

PQStats& PQStats::operator+=(const PQStats& other)
{
    for (const auto& [c, s] : other.per_category) {
        per_category[c] += s;
    }
    return *this;
}

namespace {

QualityTriple average(const PQStats& stats, const CategoryTable& categories, int filter)
{
    // filter: 0 all, 1 things, 2 stuff
    QualityTriple out;
    for (const Category& c : categories.all()) {
        if ((filter == 1 && !c.is_thing) || (filter == 2 && c.is_thing)) {
            continue;
        }
        auto it = stats.per_category.find(c.id);
        if (it == stats.per_category.end()) {
            continue;
        }
        const CategoryStats& s = it->second;
        if (s.tp + s.fp + s.fn == 0) {
            continue;
        }
        const double denom = static_cast<double>(s.tp) + 0.5 * static_cast<double>(s.fp + s.fn);
        out.pq += s.iou_sum / denom;
        out.sq += s.tp > 0 ? s.iou_sum / static_cast<double>(s.tp) : 0.0;
        out.rq += static_cast<double>(s.tp) / denom;
        ++out.categories;
    }
    if (out.categories > 0) {
        out.pq = 100.0 * out.pq / out.categories;
        out.sq = 100.0 * out.sq / out.categories;
        out.rq = 100.0 * out.rq / out.categories;
    }
    return out;
}

} // namespace

PQSummary PQStats::summarize(const CategoryTable& categories) const
{
    return {average(*this, categories, 0), average(*this, categories, 1), average(*this, categories, 2)};
}

PQStats evaluate(const PanopticMap& pred, const PanopticMap& gt, const CategoryTable& categories)
{
    if (pred.height() != gt.height() || pred.width() != gt.width()) {
        throw ShapeError("prediction is " + std::to_string(pred.height()) + "x" + std::to_string(pred.width()) +
                         " but ground truth is " + std::to_string(gt.height()) + "x" + std::to_string(gt.width()));
    }
    for (const Segment& s : gt.segments) {
        if (!categories.contains(s.category)) {
            throw Error("ground-truth category " + std::to_string(s.category) + " is not in the category table");
        }
    }

    const Plane<SegmentId> pred_ids = pred.segment_ids();
    const Plane<SegmentId> gt_ids = gt.segment_ids();

    std::map<std::pair<SegmentId, SegmentId>, std::int64_t> overlap; // (gt, pred)
    for (std::size_t i = 0; i < pred_ids.size(); ++i) {
        const SegmentId p = pred_ids.values()[i];
        if (p != 0) {
            ++overlap[{gt_ids.values()[i], p}];
        }
    }

    std::map<SegmentId, const Segment*> pred_seg;
    std::map<SegmentId, const Segment*> gt_seg;
    for (const Segment& s : pred.segments) pred_seg[s.id] = &s;
    for (const Segment& s : gt.segments) gt_seg[s.id] = &s;

    PQStats stats;
    for (const Segment& s : gt.segments) stats.per_category[s.category];
    for (const Segment& s : pred.segments) stats.per_category[s.category];

    std::set<SegmentId> gt_matched;
    std::set<SegmentId> pred_matched;
    for (const auto& [key, inter] : overlap) {
        const auto [g, p] = key;
        if (g == 0) {
            continue;
        }
        const Segment* gs = gt_seg.at(g);
        const Segment* ps = pred_seg.at(p);
        if (gs->category != ps->category) {
            continue;
        }
        auto v = overlap.find({0, p});
        const std::int64_t void_part = v == overlap.end() ? 0 : v->second;
        const std::int64_t uni = ps->area + gs->area - inter - void_part;
        const double iou = static_cast<double>(inter) / static_cast<double>(uni);
        if (iou > 0.5) {
            const bool fresh = gt_matched.insert(g).second && pred_matched.insert(p).second;
            assert(fresh && "IoU > 0.5 matches are unique");
            if (!fresh) {
                throw Error("non-unique segment match");
            }
            CategoryStats& cs = stats.per_category[gs->category];
            ++cs.tp;
            cs.iou_sum += iou;
        }
    }
    for (const Segment& s : gt.segments) {
        if (!gt_matched.contains(s.id)) {
            ++stats.per_category[s.category].fn;
        }
    }
    for (const Segment& s : pred.segments) {
        if (pred_matched.contains(s.id)) {
            continue;
        }
        auto v = overlap.find({0, s.id});
        const std::int64_t void_part = v == overlap.end() ? 0 : v->second;
        if (2 * void_part > s.area) {
            continue;
        }
        ++stats.per_category[s.category].fp;
    }
    return stats;
}

} // namespace pcv
