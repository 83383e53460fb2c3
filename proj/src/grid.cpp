#include "pcv/grid.hpp"

#include <sstream>

namespace pcv {

int GridSpec::cell_count() const
{
    int total = 0;
    for (std::size_t l = 0; l < rings.size(); ++l) {
        const int s = rings[l].cell_size;
        if (s <= 0) {
            return 0;
        }
        const int outer = rings[l].extent / s;
        const int inner = l == 0 ? 0 : rings[l - 1].extent / s;
        total += outer * outer - inner * inner;
    }
    return total;
}

void GridSpec::validate() const
{
    if (rings.empty()) {
        throw GridError("grid spec has no rings");
    }
    auto fail = [](std::size_t l, const std::string& what) {
        std::ostringstream msg;
        msg << "ring " << l << ": " << what;
        throw GridError(msg.str());
    };
    for (std::size_t l = 0; l < rings.size(); ++l) {
        const GridRing& ring = rings[l];
        if (ring.extent <= 0 || ring.extent % 2 == 0) {
            fail(l, "extent " + std::to_string(ring.extent) + " is not a positive odd number");
        }
        if (ring.cell_size <= 0 || ring.cell_size % 2 == 0) {
            fail(l, "cell size " + std::to_string(ring.cell_size) + " is not a positive odd number");
        }
        if (ring.extent % ring.cell_size != 0) {
            fail(l, "extent " + std::to_string(ring.extent) + " is not divisible by cell size " +
                        std::to_string(ring.cell_size));
        }
        if (l > 0) {
            const int prev = rings[l - 1].extent;
            if (ring.extent <= prev) {
                fail(l, "extent " + std::to_string(ring.extent) + " does not exceed inner extent " +
                            std::to_string(prev));
            }
            const int width = (ring.extent - prev) / 2;
            if (width % ring.cell_size != 0) {
                fail(l, "annulus width " + std::to_string(width) + " is not divisible by cell size " +
                            std::to_string(ring.cell_size));
            }
        }
    }
}

GridSpec default_grid() { return {{{3, 1}, {27, 3}, {81, 9}, {243, 27}}}; }
GridSpec simple_grid() { return {{{3, 1}, {9, 3}, {27, 9}, {81, 27}, {243, 81}}}; }
GridSpec uniform_grid() { return {{{225, 15}}}; }
GridSpec toy_grid() { return {{{3, 1}, {9, 3}}}; }

GridSpec grid_for(GridScheme scheme)
{
    switch (scheme) {
    case GridScheme::Default: return default_grid();
    case GridScheme::Simple: return simple_grid();
    case GridScheme::Uniform: return uniform_grid();
    case GridScheme::Toy: return toy_grid();
    }
    return default_grid();
}

std::optional<GridScheme> parse_scheme(std::string_view name)
{
    if (name == "default") return GridScheme::Default;
    if (name == "simple") return GridScheme::Simple;
    if (name == "uniform") return GridScheme::Uniform;
    if (name == "toy") return GridScheme::Toy;
    return std::nullopt;
}

std::string_view scheme_name(GridScheme scheme)
{
    switch (scheme) {
    case GridScheme::Default: return "default";
    case GridScheme::Simple: return "simple";
    case GridScheme::Uniform: return "uniform";
    case GridScheme::Toy: return "toy";
    }
    return "default";
}

CellTable build_grid(const GridSpec& spec)
{
    spec.validate();

    CellTable t;
    t.side_ = spec.side();
    t.index_ = Plane<CellIndex>(t.side_, t.side_, -1);
    const int reach = t.reach();

    for (std::size_t l = 0; l < spec.rings.size(); ++l) {
        const int s = spec.rings[l].cell_size;
        const int extent = spec.rings[l].extent;
        const int inner = l == 0 ? 0 : spec.rings[l - 1].extent;
        const int per_side = extent / s;
        // Cell grid of this ring is aligned to the ring's outer edge, which is
        // centered on the window, so cell (i, j) starts at -(extent-1)/2 + i*s.
        const int origin = -(extent - 1) / 2;
        const int hole_lo = -(inner - 1) / 2;
        const int hole_hi = (inner - 1) / 2;
        for (int i = 0; i < per_side; ++i) {
            for (int j = 0; j < per_side; ++j) {
                const int y0 = origin + i * s;
                const int x0 = origin + j * s;
                if (inner > 0 && y0 >= hole_lo && y0 + s - 1 <= hole_hi && x0 >= hole_lo &&
                    x0 + s - 1 <= hole_hi) {
                    continue;
                }
                const auto k = static_cast<CellIndex>(t.cell_center_.size());
                t.cell_center_.push_back({y0 + (s - 1) / 2, x0 + (s - 1) / 2});
                t.cell_size_.push_back(s);
                t.by_size_[s].push_back(k);
                for (int dy = y0; dy < y0 + s; ++dy) {
                    for (int dx = x0; dx < x0 + s; ++dx) {
                        t.index_(dy + reach, dx + reach) = k;
                    }
                }
            }
        }
    }
    return t;
}

CellTable invert_grid(const CellTable& vf)
{
    CellTable qf;
    qf.side_ = vf.side_;
    qf.index_ = Plane<CellIndex>(vf.side_, vf.side_);
    const int last = vf.side_ - 1;
    for (int r = 0; r < vf.side_; ++r) {
        for (int c = 0; c < vf.side_; ++c) {
            qf.index_(r, c) = vf.index_(last - r, last - c);
        }
    }
    qf.cell_center_.reserve(vf.cell_center_.size());
    for (const Offset& o : vf.cell_center_) {
        qf.cell_center_.push_back(-o);
    }
    qf.cell_size_ = vf.cell_size_;
    qf.by_size_ = vf.by_size_;
    return qf;
}

} // namespace pcv
