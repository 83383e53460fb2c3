#include "pcv/render.hpp"

#include <algorithm>

namespace pcv {

void palette_color(std::size_t index, std::uint8_t rgb[3]) noexcept
{
    std::uint64_t z = static_cast<std::uint64_t>(index) * 0x9e3779b97f4a7c15ULL + 0x632be59bd9b4e019ULL;
    z = (z ^ (z >> 31)) * 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 29;
    // Keep channels away from black so colors stand out on the background.
    rgb[0] = static_cast<std::uint8_t>(64 + (z & 0xbf));
    rgb[1] = static_cast<std::uint8_t>(64 + ((z >> 8) & 0xbf));
    rgb[2] = static_cast<std::uint8_t>(64 + ((z >> 16) & 0xbf));
}

RgbImage render_grid(const CellTable& table, int zoom)
{
    zoom = std::max(1, zoom);
    const int side = table.side() * zoom;
    RgbImage img{side, side, std::vector<std::uint8_t>(static_cast<std::size_t>(side) * side * 3)};
    for (int y = 0; y < side; ++y) {
        for (int x = 0; x < side; ++x) {
            const CellIndex k = table.table()(y / zoom, x / zoom);
            palette_color(static_cast<std::size_t>(k), &img.pixels[(static_cast<std::size_t>(y) * side + x) * 3]);
        }
    }
    return img;
}

std::vector<std::uint8_t> render_heatmap(const Heatmap& heat)
{
    std::vector<std::uint8_t> out(heat.size(), 0);
    const auto v = heat.values();
    const double top = v.empty() ? 0.0 : *std::max_element(v.begin(), v.end());
    if (top <= 0.0) {
        return out;
    }
    for (std::size_t i = 0; i < v.size(); ++i) {
        out[i] = static_cast<std::uint8_t>(std::clamp(v[i] / top * 255.0 + 0.5, 0.0, 255.0));
    }
    return out;
}

namespace {

RgbImage paint(int height, int width, const auto& groups, auto&& color_of)
{
    RgbImage img{width, height, std::vector<std::uint8_t>(static_cast<std::size_t>(width) * height * 3, 0)};
    for (std::size_t g = 0; g < groups.size(); ++g) {
        std::uint8_t rgb[3];
        palette_color(color_of(groups[g], g), rgb);
        for (const Pixel& p : groups[g].pixels) {
            std::uint8_t* dst = &img.pixels[(static_cast<std::size_t>(p.row) * width + p.col) * 3];
            std::copy(rgb, rgb + 3, dst);
        }
    }
    return img;
}

} // namespace

RgbImage render_peaks(int height, int width, const std::vector<PeakRegion>& peaks)
{
    return paint(height, width, peaks, [](const PeakRegion&, std::size_t g) { return g; });
}

RgbImage render_masks(int height, int width, const std::vector<InstanceMask>& masks)
{
    return paint(height, width, masks, [](const InstanceMask& m, std::size_t) { return m.peak; });
}

} // namespace pcv
