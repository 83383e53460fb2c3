#include "pcv/backproject.hpp"

#include "pcv/error.hpp"

#include <algorithm>
#include <numeric>

namespace pcv {

TopVotes::TopVotes(int height, int width, int depth)
    : height_(height), width_(width), depth_(depth),
      indices_(static_cast<std::size_t>(height) * width * depth, kNoCell), abstaining_(height, width, 0)
{
}

int TopVotes::rank_of(int row, int col, CellIndex cell) const noexcept
{
    const auto slots = at(row, col);
    for (int r = 0; r < depth_; ++r) {
        if (slots[r] == cell) {
            return r;
        }
    }
    return -1;
}

TopVotes top_votes(const VoteTensor& votes, int depth)
{
    if (depth < 1) {
        throw DomainError("top-k depth must be at least 1");
    }
    const int cells = votes.channels() - 1;
    TopVotes out(votes.height(), votes.width(), depth);
    std::vector<CellIndex> order(static_cast<std::size_t>(cells));
    for (int y = 0; y < votes.height(); ++y) {
        for (int x = 0; x < votes.width(); ++x) {
            if (votes.is_ignored(y, x)) {
                out.set_abstaining(y, x, true);
                continue;
            }
            const double abstain = votes(y, x, votes.abstention());
            double best = -1.0;
            for (int c = 0; c < cells; ++c) {
                best = std::max(best, votes(y, x, c));
            }
            if (abstain >= best) {
                out.set_abstaining(y, x, true);
                continue;
            }
            std::iota(order.begin(), order.end(), 0);
            const auto take = static_cast<std::ptrdiff_t>(std::min(depth, cells));
            std::partial_sort(order.begin(), order.begin() + take, order.end(), [&](CellIndex a, CellIndex b) {
                const double pa = votes(y, x, a);
                const double pb = votes(y, x, b);
                return pa != pb ? pa > pb : a < b;
            });
            auto slots = out.at(y, x);
            for (std::ptrdiff_t r = 0; r < take; ++r) {
                const CellIndex c = order[static_cast<std::size_t>(r)];
                if (votes(y, x, c) <= 0.0) {
                    break;
                }
                slots[static_cast<std::size_t>(r)] = c;
            }
        }
    }
    return out;
}

namespace {

/// Pixel counts of one peak over its bounding box, as a summed-area table.
class RegionCounter {
public:
    explicit RegionCounter(const PeakRegion& region)
        : row0_(region.min_row), col0_(region.min_col), row1_(region.max_row), col1_(region.max_col),
          sums_(region.max_row - region.min_row + 2, region.max_col - region.min_col + 2, 0)
    {
        for (const Pixel& p : region.pixels) {
            sums_(p.row - row0_ + 1, p.col - col0_ + 1) = 1;
        }
        for (int y = 1; y < sums_.height(); ++y) {
            for (int x = 1; x < sums_.width(); ++x) {
                sums_(y, x) += sums_(y - 1, x) + sums_(y, x - 1) - sums_(y - 1, x - 1);
            }
        }
    }

    /// True if any region pixel lies in rows [y0, y1] x cols [x0, x1].
    bool hits(int y0, int y1, int x0, int x1) const noexcept
    {
        y0 = std::max(y0, row0_);
        y1 = std::min(y1, row1_);
        x0 = std::max(x0, col0_);
        x1 = std::min(x1, col1_);
        if (y0 > y1 || x0 > x1) {
            return false;
        }
        y0 -= row0_;
        y1 -= row0_ - 1;
        x0 -= col0_;
        x1 -= col0_ - 1;
        return sums_(y1, x1) - sums_(y0, x1) - sums_(y1, x0) + sums_(y0, x0) > 0;
    }

private:
    int row0_, col0_, row1_, col1_;
    Plane<int> sums_;
};

double squared_distance(Pixel p, Point2 c)
{
    const double dy = p.row - c.row;
    const double dx = p.col - c.col;
    return dy * dy + dx * dx;
}

} // namespace

Plane<std::vector<Claim>> collect_claims(const std::vector<PeakRegion>& peaks, const TopVotes& votes,
                                         const CellTable& qf)
{
    Plane<std::vector<Claim>> claims(votes.height(), votes.width());
    if (peaks.empty()) {
        return claims;
    }
    std::vector<RegionCounter> counters;
    counters.reserve(peaks.size());
    for (const PeakRegion& r : peaks) {
        counters.emplace_back(r);
    }

    for (int y = 0; y < votes.height(); ++y) {
        for (int x = 0; x < votes.width(); ++x) {
            if (votes.abstaining(y, x)) {
                continue;
            }
            const auto slots = votes.at(y, x);
            auto& out = claims(y, x);
            for (int rank = 0; rank < votes.depth(); ++rank) {
                const CellIndex k = slots[static_cast<std::size_t>(rank)];
                if (k == kNoCell) {
                    continue;
                }
                // q satisfies query(p - q) == k exactly on the block centered
                // at p - center(k).
                const Offset c = qf.cell_center(k);
                const int r = (qf.cell_size(k) - 1) / 2;
                const int cy = y - c.dy;
                const int cx = x - c.dx;
                for (std::size_t j = 0; j < peaks.size(); ++j) {
                    if (!counters[j].hits(cy - r, cy + r, cx - r, cx + r)) {
                        continue;
                    }
                    const bool seen = std::any_of(out.begin(), out.end(), [&](const Claim& cl) { return cl.peak == j; });
                    if (!seen) {
                        out.push_back({j, rank});
                    }
                }
            }
            std::sort(out.begin(), out.end(), [](const Claim& a, const Claim& b) { return a.peak < b.peak; });
        }
    }
    return claims;
}

std::size_t resolve_claim(Pixel pixel, std::span<const Claim> claims, const std::vector<PeakRegion>& peaks,
                          const TopVotes& votes)
{
    // Within one cell of the pixel, the nearest bounding-box center wins.
    // Across cells, the highest total vote wins. Claims arrive in peak order,
    // so strict comparisons leave ties with the earlier peak.
    const auto slots = votes.at(pixel.row, pixel.col);
    std::vector<std::pair<CellIndex, std::size_t>> cell_winner;
    for (const Claim& cl : claims) {
        const CellIndex cell = slots[static_cast<std::size_t>(cl.rank)];
        auto it = std::find_if(cell_winner.begin(), cell_winner.end(), [&](const auto& e) { return e.first == cell; });
        if (it == cell_winner.end()) {
            cell_winner.emplace_back(cell, cl.peak);
        } else if (squared_distance(pixel, peaks[cl.peak].bbox_center) <
                   squared_distance(pixel, peaks[it->second].bbox_center)) {
            it->second = cl.peak;
        }
    }
    std::size_t best = cell_winner.front().second;
    for (const auto& [cell, peak] : cell_winner) {
        const double v = peaks[peak].total_vote;
        const double bv = peaks[best].total_vote;
        if (v > bv || (v == bv && peak < best)) {
            best = peak;
        }
    }
    return best;
}

std::vector<InstanceMask> backproject(const std::vector<PeakRegion>& peaks, const TopVotes& votes,
                                      const CellTable& qf)
{
    std::vector<InstanceMask> masks(peaks.size());
    for (std::size_t j = 0; j < peaks.size(); ++j) {
        masks[j].peak = j;
    }
    const Plane<std::vector<Claim>> claims = collect_claims(peaks, votes, qf);
    for (int y = 0; y < votes.height(); ++y) {
        for (int x = 0; x < votes.width(); ++x) {
            const auto& c = claims(y, x);
            if (c.empty()) {
                continue;
            }
            const std::size_t winner = c.size() == 1 ? c.front().peak : resolve_claim({y, x}, c, peaks, votes);
            masks[winner].pixels.push_back({y, x});
        }
    }
    return masks;
}

} // namespace pcv
