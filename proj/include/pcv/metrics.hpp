#pragma once

// Panoptic quality.
//
// Per category, predicted and ground-truth segments of that category match
// when their IoU exceeds 0.5; such matches are unique. Void ground-truth
// pixels are removed from the union. An unmatched prediction is a false
// positive unless more than half of it lies on void ground truth, in which
// case it is ignored. Predictions with categories outside the table are
// false positives of their own (unlisted) category and do not enter the
// table averages.
//
//   PQ = sum(IoU of matches) / (TP + FP/2 + FN/2)
//   SQ = sum(IoU of matches) / TP
//   RQ = TP / (TP + FP/2 + FN/2)
//
// Summaries average over the categories with at least one TP, FP or FN and
// are reported as percentages.

#include "pcv/panoptic.hpp"

#include <map>

namespace pcv {

struct CategoryStats {
    double iou_sum = 0.0;
    std::int64_t tp = 0;
    std::int64_t fp = 0;
    std::int64_t fn = 0;

    CategoryStats& operator+=(const CategoryStats& o) noexcept
    {
        iou_sum += o.iou_sum;
        tp += o.tp;
        fp += o.fp;
        fn += o.fn;
        return *this;
    }
    friend bool operator==(const CategoryStats&, const CategoryStats&) = default;
};

struct QualityTriple {
    double pq = 0.0;
    double sq = 0.0;
    double rq = 0.0;
    int categories = 0;
};

struct PQSummary {
    QualityTriple all;
    QualityTriple things;
    QualityTriple stuff;
};

/// Raw per-category statistics; accumulate across images with +=.
struct PQStats {
    std::map<CategoryId, CategoryStats> per_category;

    PQStats& operator+=(const PQStats& other);
    PQSummary summarize(const CategoryTable& categories) const;

    friend bool operator==(const PQStats&, const PQStats&) = default;
};

/// Throws ShapeError on size mismatch and Error when a ground-truth category
/// is missing from the table.
PQStats evaluate(const PanopticMap& pred, const PanopticMap& gt, const CategoryTable& categories);

} // namespace pcv
