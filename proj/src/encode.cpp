#include "pcv/encode.hpp"

#include <cmath>

namespace pcv {

Point2 centroid(std::span<const Pixel> mask)
{
    if (mask.empty()) {
        throw DomainError("centroid of an empty mask");
    }
    double sr = 0.0;
    double sc = 0.0;
    for (const Pixel& p : mask) {
        sr += p.row;
        sc += p.col;
    }
    const auto n = static_cast<double>(mask.size());
    return {sr / n, sc / n};
}

Pixel round_to_pixel(Point2 p)
{
    return {static_cast<int>(std::round(p.row)), static_cast<int>(std::round(p.col))};
}

LabelField encode_labels(const PanopticAnnotation& ann, const CellTable& vf)
{
    const int h = ann.height();
    const int w = ann.width();
    const int k = vf.cell_count();

    LabelField out;
    out.abstention = k;
    out.semantic = Plane<CategoryId>(h, w, kVoidCategory);
    out.vote = Plane<int>(h, w, k);

    // Integer sums are exact; the division happens once per segment.
    struct Sums {
        std::int64_t rows = 0;
        std::int64_t cols = 0;
        std::int64_t n = 0;
    };
    std::map<SegmentId, Sums> sums;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const SegmentId id = ann.ids(y, x);
            if (id == 0) {
                continue;
            }
            const SegmentInfo& info = ann.segments.at(id);
            out.semantic(y, x) = info.category;
            if (info.is_thing) {
                Sums& s = sums[id];
                s.rows += y;
                s.cols += x;
                ++s.n;
            }
        }
    }

    std::map<SegmentId, Pixel> anchor;
    for (const auto& [id, s] : sums) {
        const Point2 c{static_cast<double>(s.rows) / static_cast<double>(s.n),
                       static_cast<double>(s.cols) / static_cast<double>(s.n)};
        out.centroids.emplace(id, c);
        anchor.emplace(id, round_to_pixel(c));
    }

    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            auto it = anchor.find(ann.ids(y, x));
            if (it == anchor.end()) {
                continue;
            }
            const auto cell = vf.lookup({it->second.row - y, it->second.col - x});
            out.vote(y, x) = cell ? *cell : kIgnoreVote;
        }
    }
    return out;
}

} // namespace pcv
