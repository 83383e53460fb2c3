#pragma once

#include "pcv/grid.hpp"
#include "pcv/plane.hpp"
#include "pcv/simd/kernels.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace pcv {

/// Per-pixel distribution over K cells plus abstention (channel K).
///
/// Stored channel-major: channel(c) is an H x W plane. Pixels flagged in
/// `ignored` take no part in aggregation and are treated as abstaining.
class VoteTensor {
public:
    VoteTensor() = default;
    VoteTensor(int height, int width, int channels);

    int height() const noexcept { return height_; }
    int width() const noexcept { return width_; }
    int channels() const noexcept { return channels_; }
    int abstention() const noexcept { return channels_ - 1; }

    double& operator()(int row, int col, int channel) noexcept
    {
        return probs_[index(row, col, channel)];
    }
    double operator()(int row, int col, int channel) const noexcept
    {
        return probs_[index(row, col, channel)];
    }

    std::span<double> channel(int c) noexcept { return {probs_.data() + plane_offset(c), plane_size()}; }
    std::span<const double> channel(int c) const noexcept
    {
        return {probs_.data() + plane_offset(c), plane_size()};
    }

    Plane<std::uint8_t>& ignored() noexcept { return ignored_; }
    const Plane<std::uint8_t>& ignored() const noexcept { return ignored_; }
    bool is_ignored(int row, int col) const noexcept { return ignored_(row, col) != 0; }

    /// Throws DomainError unless entries are finite and nonnegative and every
    /// non-ignored pixel sums to 1 within `tolerance`.
    void validate(double tolerance = 1e-5) const;

    friend bool operator==(const VoteTensor&, const VoteTensor&) = default;

private:
    std::size_t plane_size() const noexcept { return static_cast<std::size_t>(height_) * width_; }
    std::size_t plane_offset(int c) const noexcept { return static_cast<std::size_t>(c) * plane_size(); }
    std::size_t index(int row, int col, int c) const noexcept
    {
        return plane_offset(c) + static_cast<std::size_t>(row) * width_ + col;
    }

    int height_ = 0;
    int width_ = 0;
    int channels_ = 0;
    std::vector<double> probs_;
    Plane<std::uint8_t> ignored_;
};

using Heatmap = Plane<double>;

/// Voting heatmap: every pixel spreads each cell probability evenly over the
/// cell's pixels placed relative to itself. Votes landing outside the image
/// are dropped. Abstention contributes nothing.
///
/// Cells are processed one size class at a time: each cell's probability
/// plane is added at the cell center of a padded accumulator, then the
/// accumulator is box-summed with the class's cell side and scaled by
/// 1/side^2. Throws ShapeError when the channel count is not K + 1.
Heatmap aggregate_votes(const VoteTensor& votes, const CellTable& vf);
Heatmap aggregate_votes(const VoteTensor& votes, const CellTable& vf, const simd::KernelTable& kernels);

/// Reference: direct loop over pixels, cells and the in-image pixels of each cell.
Heatmap brute_force_aggregate(const VoteTensor& votes, const CellTable& vf);

} // namespace pcv
