#include "pcv/peaks.hpp"

#include "pcv/error.hpp"

#include <algorithm>
#include <cmath>

namespace pcv {

std::vector<PeakRegion> find_peaks(const Heatmap& heat, double threshold, Connectivity connectivity)
{
    return find_peaks(heat, threshold, connectivity, simd::active_kernels());
}

std::vector<PeakRegion> find_peaks(const Heatmap& heat, double threshold, Connectivity connectivity,
                                   const simd::KernelTable& kernels)
{
    if (!(threshold > 0.0) || !std::isfinite(threshold)) {
        throw DomainError("peak threshold must be positive and finite");
    }
    const int h = heat.height();
    const int w = heat.width();
    Plane<std::uint8_t> alive(h, w, 0);
    if (kernels.above(heat.data(), threshold, alive.data(), heat.size()) == 0) {
        return {};
    }

    static constexpr int kDy[] = {-1, 1, 0, 0, -1, -1, 1, 1};
    static constexpr int kDx[] = {0, 0, -1, 1, -1, 1, -1, 1};
    const int neighbors = connectivity == Connectivity::Eight ? 8 : 4;

    std::vector<PeakRegion> regions;
    std::vector<Pixel> stack;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (alive(y, x) == 0) {
                continue;
            }
            PeakRegion region;
            alive(y, x) = 0;
            stack.push_back({y, x});
            while (!stack.empty()) {
                const Pixel p = stack.back();
                stack.pop_back();
                region.pixels.push_back(p);
                for (int n = 0; n < neighbors; ++n) {
                    const int ny = p.row + kDy[n];
                    const int nx = p.col + kDx[n];
                    if (alive.contains(ny, nx) && alive(ny, nx) != 0) {
                        alive(ny, nx) = 0;
                        stack.push_back({ny, nx});
                    }
                }
            }
            std::sort(region.pixels.begin(), region.pixels.end());
            region.min_row = region.max_row = y;
            region.min_col = region.max_col = x;
            for (const Pixel& p : region.pixels) {
                region.total_vote += heat(p);
                region.min_row = std::min(region.min_row, p.row);
                region.max_row = std::max(region.max_row, p.row);
                region.min_col = std::min(region.min_col, p.col);
                region.max_col = std::max(region.max_col, p.col);
            }
            region.bbox_center = {(region.min_row + region.max_row) / 2.0, (region.min_col + region.max_col) / 2.0};
            regions.push_back(std::move(region));
        }
    }
    return regions;
}

} // namespace pcv
