#pragma once
// Helpers and independent reference implementations for the tests.
#include "pcv/backproject.hpp"
#include "pcv/metrics.hpp"
#include "pcv/panoptic.hpp"
#include "pcv/synth.hpp"

#include <cmath>
#include <map>
#include <random>
#include <set>
#include <vector>

namespace pcv::test {

inline CategoryTable small_categories()
{
    return CategoryTable({{1, "person", true}, {2, "car", true}, {11, "sky", false}, {12, "road", false}});
}

/// Annotation with every pixel in one stuff segment (id 1, category `stuff`).
inline PanopticAnnotation stuff_scene(int h, int w, CategoryId stuff = 11)
{
    PanopticAnnotation ann;
    ann.ids = Plane<SegmentId>(h, w, 1);
    ann.segments[1] = {stuff, false};
    return ann;
}

/// Paints an axis-aligned rectangle as a new thing segment.
inline SegmentId add_rect(PanopticAnnotation& ann, int r0, int c0, int rows, int cols, CategoryId cat = 1)
{
    const SegmentId id = ann.segments.empty() ? 1 : ann.segments.rbegin()->first + 1;
    ann.segments[id] = {cat, true};
    for (int r = r0; r < r0 + rows; ++r) {
        for (int c = c0; c < c0 + cols; ++c) {
            ann.ids(r, c) = id;
        }
    }
    return id;
}

/// Random vote tensor, each pixel a random distribution over all channels,
/// with a sprinkling of ignored pixels.
inline VoteTensor random_votes(int h, int w, int channels, std::mt19937_64& rng, double ignore_rate = 0.05)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    VoteTensor v(h, w, channels);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double sum = 0.0;
            for (int c = 0; c < channels; ++c) {
                const double p = u(rng) < 0.7 ? 0.0 : u(rng);
                v(y, x, c) = p;
                sum += p;
            }
            if (sum == 0.0) {
                v(y, x, channels - 1) = 1.0;
                sum = 1.0;
            }
            for (int c = 0; c < channels; ++c) {
                v(y, x, c) /= sum;
            }
            if (u(rng) < ignore_rate) {
                v.ignored()(y, x) = 1;
            }
        }
    }
    return v;
}

inline PeakRegion make_peak(std::vector<Pixel> pixels, double total_vote)
{
    PeakRegion r;
    r.pixels = std::move(pixels);
    r.total_vote = total_vote;
    r.min_row = r.max_row = r.pixels.front().row;
    r.min_col = r.max_col = r.pixels.front().col;
    for (const Pixel& p : r.pixels) {
        r.min_row = std::min(r.min_row, p.row);
        r.max_row = std::max(r.max_row, p.row);
        r.min_col = std::min(r.min_col, p.col);
        r.max_col = std::max(r.max_col, p.col);
    }
    r.bbox_center = {(r.min_row + r.max_row) / 2.0, (r.min_col + r.max_col) / 2.0};
    return r;
}

// ---------------------------------------------------------------------------
// Brute-force backprojection: enumerate every (pixel, peak, peak pixel) triple.

struct NaiveClaim {
    std::size_t peak;
    int rank;
};

inline std::vector<NaiveClaim> naive_claims(Pixel p, const std::vector<PeakRegion>& peaks, const TopVotes& votes,
                                            const CellTable& qf)
{
    std::vector<NaiveClaim> out;
    if (votes.abstaining(p.row, p.col)) {
        return out;
    }
    for (std::size_t j = 0; j < peaks.size(); ++j) {
        int best = -1;
        for (const Pixel& q : peaks[j].pixels) {
            const auto cell = qf.lookup({p.row - q.row, p.col - q.col});
            if (!cell) {
                continue;
            }
            const int rank = votes.rank_of(p.row, p.col, *cell);
            if (rank >= 0 && (best < 0 || rank < best)) {
                best = rank;
            }
        }
        if (best >= 0) {
            out.push_back({j, best});
        }
    }
    return out;
}

inline std::vector<std::vector<Pixel>> naive_backproject(const std::vector<PeakRegion>& peaks,
                                                         const TopVotes& votes, const CellTable& qf)
{
    std::vector<std::vector<Pixel>> masks(peaks.size());
    for (int y = 0; y < votes.height(); ++y) {
        for (int x = 0; x < votes.width(); ++x) {
            const auto claims = naive_claims({y, x}, peaks, votes, qf);
            if (claims.empty()) {
                continue;
            }
            // Nearest bbox center per matching cell, then highest total vote.
            std::map<CellIndex, std::size_t> per_cell;
            for (const auto& c : claims) {
                const CellIndex cell = votes.at(y, x)[static_cast<std::size_t>(c.rank)];
                auto dist = [&](std::size_t j) {
                    const double dy = y - peaks[j].bbox_center.row;
                    const double dx = x - peaks[j].bbox_center.col;
                    return dy * dy + dx * dx;
                };
                auto [it, fresh] = per_cell.emplace(cell, c.peak);
                if (!fresh && (dist(c.peak) < dist(it->second) ||
                               (dist(c.peak) == dist(it->second) && c.peak < it->second))) {
                    it->second = c.peak;
                }
            }
            std::size_t win = per_cell.begin()->second;
            for (const auto& [cell, j] : per_cell) {
                if (peaks[j].total_vote > peaks[win].total_vote ||
                    (peaks[j].total_vote == peaks[win].total_vote && j < win)) {
                    win = j;
                }
            }
            masks[win].push_back({y, x});
        }
    }
    return masks;
}

// ---------------------------------------------------------------------------
// Naive PQ: per category, loop over every (pred, gt) pair and scan the image.

inline PQSummary naive_pq(const PanopticMap& pred, const PanopticMap& gt, const CategoryTable& cats)
{
    const Plane<SegmentId> pid = pred.segment_ids();
    const Plane<SegmentId> gid = gt.segment_ids();
    const int h = gt.height();
    const int w = gt.width();

    auto count = [&](auto&& f) {
        std::int64_t n = 0;
        for (int y = 0; y < h; ++y) {
            for (int x = 0; x < w; ++x) {
                n += f(y, x) ? 1 : 0;
            }
        }
        return n;
    };

    struct Acc {
        double iou = 0;
        double tp = 0, fp = 0, fn = 0;
    };
    std::map<CategoryId, Acc> acc;

    for (const Category& c : cats.all()) {
        Acc a;
        std::vector<SegmentId> ps, gs;
        for (const Segment& s : pred.segments) {
            if (s.category == c.id) {
                ps.push_back(s.id);
            }
        }
        for (const Segment& s : gt.segments) {
            if (s.category == c.id) {
                gs.push_back(s.id);
            }
        }
        std::set<SegmentId> matched_p, matched_g;
        for (SegmentId p : ps) {
            for (SegmentId g : gs) {
                const auto inter = count([&](int y, int x) { return pid(y, x) == p && gid(y, x) == g; });
                const auto pa = count([&](int y, int x) { return pid(y, x) == p; });
                const auto ga = count([&](int y, int x) { return gid(y, x) == g; });
                const auto pv = count([&](int y, int x) { return pid(y, x) == p && gid(y, x) == 0; });
                const double iou = static_cast<double>(inter) / static_cast<double>(pa + ga - inter - pv);
                if (iou > 0.5) {
                    a.iou += iou;
                    a.tp += 1;
                    matched_p.insert(p);
                    matched_g.insert(g);
                }
            }
        }
        a.fn = static_cast<double>(gs.size() - matched_g.size());
        for (SegmentId p : ps) {
            if (matched_p.count(p) != 0) {
                continue;
            }
            const auto pa = count([&](int y, int x) { return pid(y, x) == p; });
            const auto pv = count([&](int y, int x) { return pid(y, x) == p && gid(y, x) == 0; });
            if (2 * pv <= pa) {
                a.fp += 1;
            }
        }
        acc[c.id] = a;
    }

    auto average = [&](int which) {
        QualityTriple t;
        double pq = 0, sq = 0, rq = 0;
        for (const Category& c : cats.all()) {
            if ((which == 1 && !c.is_thing) || (which == 2 && c.is_thing)) {
                continue;
            }
            const Acc& a = acc[c.id];
            if (a.tp + a.fp + a.fn == 0) {
                continue;
            }
            const double denom = a.tp + 0.5 * a.fp + 0.5 * a.fn;
            pq += a.iou / denom;
            sq += a.tp > 0 ? a.iou / a.tp : 0.0;
            rq += a.tp / denom;
            ++t.categories;
        }
        if (t.categories > 0) {
            t.pq = 100.0 * pq / t.categories;
            t.sq = 100.0 * sq / t.categories;
            t.rq = 100.0 * rq / t.categories;
        }
        return t;
    };
    return {average(0), average(1), average(2)};
}

inline bool close_rel(double a, double b, double rel)
{
    return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}

} // namespace pcv::test
