#pragma once

#include "pcv/backproject.hpp"
#include "pcv/grid.hpp"
#include "pcv/png.hpp"

namespace pcv {

/// Stable pseudo-random color for an index.
void palette_color(std::size_t index, std::uint8_t rgb[3]) noexcept;

/// Cell partition of a filter, each cell in its own color, `zoom` pixels per offset.
RgbImage render_grid(const CellTable& table, int zoom = 1);

/// Heatmap scaled so its maximum is white.
std::vector<std::uint8_t> render_heatmap(const Heatmap& heat);

/// Peak regions in their palette colors on black.
RgbImage render_peaks(int height, int width, const std::vector<PeakRegion>& peaks);

/// Masks colored like the peak they came from.
RgbImage render_masks(int height, int width, const std::vector<InstanceMask>& masks);

} // namespace pcv
