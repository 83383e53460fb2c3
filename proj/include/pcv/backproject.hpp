#pragma once

#include "pcv/aggregate.hpp"
#include "pcv/peaks.hpp"

#include <vector>

namespace pcv {

inline constexpr int kDefaultTopK = 3;
inline constexpr CellIndex kNoCell = -1;

/// Strongest non-abstention cells per pixel.
///
/// Slots hold cell indices by descending probability (ties: lower index
/// first); cells with zero probability are never listed and unused slots hold
/// kNoCell. A pixel is abstaining when abstention is its argmax channel (ties
/// go to abstention) or when it is ignored; abstaining pixels list nothing.
class TopVotes {
public:
    TopVotes() = default;
    TopVotes(int height, int width, int depth);

    int height() const noexcept { return height_; }
    int width() const noexcept { return width_; }
    int depth() const noexcept { return depth_; }

    std::span<CellIndex> at(int row, int col) noexcept
    {
        return {indices_.data() + slot(row, col), static_cast<std::size_t>(depth_)};
    }
    std::span<const CellIndex> at(int row, int col) const noexcept
    {
        return {indices_.data() + slot(row, col), static_cast<std::size_t>(depth_)};
    }

    bool abstaining(int row, int col) const noexcept { return abstaining_(row, col) != 0; }
    void set_abstaining(int row, int col, bool value) noexcept { abstaining_(row, col) = value ? 1 : 0; }

    /// Rank of `cell` among the pixel's votes, or -1.
    int rank_of(int row, int col, CellIndex cell) const noexcept;

private:
    std::size_t slot(int row, int col) const noexcept
    {
        return (static_cast<std::size_t>(row) * width_ + col) * depth_;
    }

    int height_ = 0;
    int width_ = 0;
    int depth_ = 0;
    std::vector<CellIndex> indices_;
    Plane<std::uint8_t> abstaining_;
};

/// Throws DomainError unless depth >= 1.
TopVotes top_votes(const VoteTensor& votes, int depth = kDefaultTopK);

/// Class-agnostic mask collected for one peak region.
struct InstanceMask {
    std::vector<Pixel> pixels; ///< raster order
    std::size_t peak = 0;      ///< index into the peak list
};

/// Pixel p is claimed by region R when some q in R satisfies
/// query(p - q) in top(p), i.e. one of p's listed cells, placed around p,
/// covers a pixel of R. A pixel claimed by several regions goes to the region
/// with the highest total vote, except that regions reached through the same
/// cell of p compete on distance from p to their bounding-box center instead.
/// Remaining ties go to the earlier region.
///
/// Returns one mask per peak, in peak order, possibly empty.
std::vector<InstanceMask> backproject(const std::vector<PeakRegion>& peaks, const TopVotes& votes,
                                      const CellTable& qf);

/// Per-pixel claim sets before conflict resolution: for every pixel, the peak
/// indices (ascending) that claim it, each with the best-ranked matching slot.
struct Claim {
    std::size_t peak = 0;
    int rank = 0;
};
Plane<std::vector<Claim>> collect_claims(const std::vector<PeakRegion>& peaks, const TopVotes& votes,
                                         const CellTable& qf);

/// Applies the conflict rules to one pixel's claims. Returns the winning peak index.
std::size_t resolve_claim(Pixel pixel, std::span<const Claim> claims, const std::vector<PeakRegion>& peaks,
                          const TopVotes& votes);

} // namespace pcv
