#pragma once

// Voting-filter geometry.
//
// A filter covers an M x M window of offsets around a pixel and partitions it
// into K square cells. The partition is described ring by ring: ring 0 is a
// square of side extents[0] tiled by cells of side sizes[0]; ring l > 0 is the
// annulus between the squares of side extents[l-1] and extents[l], tiled by
// cells of side sizes[l]. Offsets are (dy, dx) = target - pixel.
//
// Cell indices are assigned ring by ring, inner to outer, row-major within a
// ring. Nothing downstream depends on that order beyond determinism.

#include "pcv/error.hpp"
#include "pcv/plane.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace pcv {

using CellIndex = int;

struct Offset {
    int dy = 0;
    int dx = 0;

    friend bool operator==(const Offset&, const Offset&) = default;
    Offset operator-() const noexcept { return {-dy, -dx}; }
};

struct GridRing {
    int extent = 1;    ///< outer side length of the ring, odd
    int cell_size = 1; ///< side of the square cells tiling the ring, odd
};

struct GridSpec {
    std::vector<GridRing> rings;

    /// Filter side length M (the outermost extent).
    int side() const { return rings.empty() ? 0 : rings.back().extent; }

    /// Total cell count K implied by the ring layout. Does not validate.
    int cell_count() const;

    /// Throws GridError naming the first offending ring.
    void validate() const;
};

enum class GridScheme { Default, Simple, Uniform, Toy };

/// Radial layout with sizes 1, 3, 9, 27 over a 243 window: 9 + 80 + 72 + 72 = 233 cells.
/// It is the only nested square layout with those sizes, that window and that count.
GridSpec default_grid();
/// One 3x3 shell per ring with sizes 1, 3, 9, 27, 81: 9 + 8 * 4 = 41 cells.
GridSpec simple_grid();
/// Evenly spaced 15 pixel bins over a 225 window: 225 cells.
GridSpec uniform_grid();
/// 9 x 9 window, 3 x 3 unit cells surrounded by eight 3 x 3 cells: 17 cells.
GridSpec toy_grid();

GridSpec grid_for(GridScheme scheme);
std::optional<GridScheme> parse_scheme(std::string_view name);
std::string_view scheme_name(GridScheme scheme);

/// Translation invariant lookup table over an M x M window of offsets.
///
/// Immutable once built; safe to share between threads.
class CellTable {
public:
    int side() const noexcept { return side_; }
    int reach() const noexcept { return (side_ - 1) / 2; }
    int cell_count() const noexcept { return static_cast<int>(cell_center_.size()); }

    /// Cell containing the offset, or nullopt when the offset lies outside the window.
    std::optional<CellIndex> lookup(Offset o) const noexcept
    {
        const int r = reach();
        if (o.dy < -r || o.dy > r || o.dx < -r || o.dx > r) {
            return std::nullopt;
        }
        return index_(o.dy + r, o.dx + r);
    }

    /// Offset of the cell's center pixel relative to the window center.
    Offset cell_center(CellIndex k) const { return cell_center_.at(static_cast<std::size_t>(k)); }
    int cell_size(CellIndex k) const { return cell_size_.at(static_cast<std::size_t>(k)); }
    int cell_area(CellIndex k) const { return cell_size(k) * cell_size(k); }

    /// Cell indices grouped by side length, ascending sizes.
    const std::map<int, std::vector<CellIndex>>& cells_by_size() const noexcept { return by_size_; }

    /// Raw M x M table, row = dy + reach, col = dx + reach.
    const Plane<CellIndex>& table() const noexcept { return index_; }

    friend bool operator==(const CellTable&, const CellTable&) = default;

private:
    friend CellTable build_grid(const GridSpec& spec);
    friend CellTable invert_grid(const CellTable& vf);

    int side_ = 0;
    Plane<CellIndex> index_;
    std::vector<Offset> cell_center_;
    std::vector<int> cell_size_;
    std::map<int, std::vector<CellIndex>> by_size_;
};

/// Voting filter for a validated spec. Throws GridError on invalid specs.
CellTable build_grid(const GridSpec& spec);

/// Query filter: the point reflection of a voting filter about the window center.
CellTable invert_grid(const CellTable& vf);

} // namespace pcv
