#include "pcv/aggregate.hpp"

#include "pcv/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace pcv {

VoteTensor::VoteTensor(int height, int width, int channels)
    : height_(height), width_(width), channels_(channels),
      probs_(static_cast<std::size_t>(height) * width * channels, 0.0), ignored_(height, width, 0)
{
    if (height < 0 || width < 0 || channels < 1) {
        throw ShapeError("vote tensor needs nonnegative size and at least one channel");
    }
}

void VoteTensor::validate(double tolerance) const
{
    for (int y = 0; y < height_; ++y) {
        for (int x = 0; x < width_; ++x) {
            double sum = 0.0;
            for (int c = 0; c < channels_; ++c) {
                const double p = (*this)(y, x, c);
                if (!std::isfinite(p) || p < 0.0) {
                    throw DomainError("vote probability at (" + std::to_string(y) + ", " + std::to_string(x) +
                                      ") is negative or not finite");
                }
                sum += p;
            }
            if (!is_ignored(y, x) && std::abs(sum - 1.0) > tolerance) {
                throw DomainError("vote distribution at (" + std::to_string(y) + ", " + std::to_string(x) +
                                  ") sums to " + std::to_string(sum));
            }
        }
    }
}

namespace {

void check_shape(const VoteTensor& votes, const CellTable& vf)
{
    if (votes.channels() != vf.cell_count() + 1) {
        throw ShapeError("vote tensor has " + std::to_string(votes.channels()) + " channels, grid needs " +
                         std::to_string(vf.cell_count() + 1));
    }
}

bool any_ignored(const VoteTensor& votes)
{
    const auto v = votes.ignored().values();
    return std::any_of(v.begin(), v.end(), [](std::uint8_t f) { return f != 0; });
}

} // namespace

Heatmap aggregate_votes(const VoteTensor& votes, const CellTable& vf)
{
    return aggregate_votes(votes, vf, simd::active_kernels());
}

Heatmap aggregate_votes(const VoteTensor& votes, const CellTable& vf, const simd::KernelTable& kernels)
{
    check_shape(votes, vf);
    const int h = votes.height();
    const int w = votes.width();
    Heatmap heat(h, w, 0.0);
    if (h == 0 || w == 0) {
        return heat;
    }

    // Ignored pixels vote for nothing; zero them in a scratch copy of each plane.
    const bool masked = any_ignored(votes);
    std::vector<double> scratch(masked ? static_cast<std::size_t>(h) * w : 0);
    auto plane_of = [&](CellIndex k) -> const double* {
        const double* src = votes.channel(k).data();
        if (!masked) {
            return src;
        }
        const auto flags = votes.ignored().values();
        for (std::size_t i = 0; i < scratch.size(); ++i) {
            scratch[i] = flags[i] != 0 ? 0.0 : src[i];
        }
        return scratch.data();
    };

    for (const auto& [size, cells] : vf.cells_by_size()) {
        // Centers that can reach the image lie within `pad` of it.
        const int pad = (size - 1) / 2;
        const int ph = h + 2 * pad;
        const int pw = w + 2 * pad;
        Plane<double> centers(ph, pw, 0.0);

        for (CellIndex k : cells) {
            const Offset c = vf.cell_center(k);
            // Source column x lands on padded column x + c.dx + pad.
            const int x0 = std::max(0, -(c.dx + pad));
            const int x1 = std::min(w, pw - (c.dx + pad));
            const int y0 = std::max(0, -(c.dy + pad));
            const int y1 = std::min(h, ph - (c.dy + pad));
            if (x0 >= x1 || y0 >= y1) {
                continue;
            }
            const double* plane = plane_of(k);
            for (int y = y0; y < y1; ++y) {
                kernels.add(centers.row(y + c.dy + pad).data() + x0 + c.dx + pad,
                            plane + static_cast<std::size_t>(y) * w + x0, static_cast<std::size_t>(x1 - x0));
            }
        }

        if (size == 1) {
            for (int y = 0; y < h; ++y) {
                kernels.add(heat.row(y).data(), centers.row(y).data(), static_cast<std::size_t>(w));
            }
            continue;
        }

        // Box sum: vertical pass over padded columns, then horizontal.
        std::vector<double> column_sum(static_cast<std::size_t>(pw));
        std::vector<double> box(static_cast<std::size_t>(w));
        const double share = 1.0 / (static_cast<double>(size) * size);
        for (int y = 0; y < h; ++y) {
            std::fill(column_sum.begin(), column_sum.end(), 0.0);
            for (int i = 0; i < size; ++i) {
                kernels.add(column_sum.data(), centers.row(y + i).data(), column_sum.size());
            }
            std::fill(box.begin(), box.end(), 0.0);
            for (int j = 0; j < size; ++j) {
                kernels.add(box.data(), column_sum.data() + j, box.size());
            }
            kernels.axpy(heat.row(y).data(), box.data(), share, box.size());
        }
    }
    return heat;
}

Heatmap brute_force_aggregate(const VoteTensor& votes, const CellTable& vf)
{
    check_shape(votes, vf);
    const int h = votes.height();
    const int w = votes.width();
    Heatmap heat(h, w, 0.0);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (votes.is_ignored(y, x)) {
                continue;
            }
            for (CellIndex k = 0; k < vf.cell_count(); ++k) {
                const double p = votes(y, x, k);
                if (p == 0.0) {
                    continue;
                }
                const Offset c = vf.cell_center(k);
                const int r = (vf.cell_size(k) - 1) / 2;
                const double share = p / vf.cell_area(k);
                const int ty0 = std::max(0, y + c.dy - r);
                const int ty1 = std::min(h - 1, y + c.dy + r);
                const int tx0 = std::max(0, x + c.dx - r);
                const int tx1 = std::min(w - 1, x + c.dx + r);
                for (int ty = ty0; ty <= ty1; ++ty) {
                    for (int tx = tx0; tx <= tx1; ++tx) {
                        heat(ty, tx) += share;
                    }
                }
            }
        }
    }
    return heat;
}

} // namespace pcv
