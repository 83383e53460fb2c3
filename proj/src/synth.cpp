#include "pcv/synth.hpp"

#include "pcv/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace pcv {

namespace {

// Distributions are written out rather than taken from <random> so scenes
// are identical across standard library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Integer in [lo, hi].
    int integer(int lo, int hi)
    {
        const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % span;
        std::uint64_t v = engine_();
        while (v >= limit) {
            v = engine_();
        }
        return lo + static_cast<int>(v % span);
    }

private:
    std::mt19937_64 engine_;
};

constexpr CategoryId kThings[] = {1, 2, 3};
constexpr CategoryId kStuff[] = {11, 12, 13};

ShapeInstance random_shape(const SceneSpec& spec, Rng& rng)
{
    ShapeInstance s;
    switch (spec.shapes) {
    case ShapeFamily::Rectangle: s.kind = ShapeKind::Rectangle; break;
    case ShapeFamily::Ellipse: s.kind = ShapeKind::Ellipse; break;
    case ShapeFamily::Blob: s.kind = ShapeKind::Blob; break;
    case ShapeFamily::Mixed: s.kind = static_cast<ShapeKind>(rng.integer(0, 2)); break;
    }
    s.category = kThings[rng.integer(0, 2)];
    // Log-uniform size so small and large instances are equally common per octave.
    const double size = std::exp(rng.uniform(std::log(spec.min_scale), std::log(spec.max_scale + 1.0)));
    const double aspect = std::exp(rng.uniform(std::log(0.5), std::log(2.0)));
    s.half_height = std::max(0.5, size * std::sqrt(aspect) / 2.0);
    s.half_width = std::max(0.5, size / std::sqrt(aspect) / 2.0);
    s.center = {rng.uniform(0.0, spec.height - 1.0), rng.uniform(0.0, spec.width - 1.0)};
    if (s.kind == ShapeKind::Blob) {
        for (int k = 2; k <= 4; ++k) {
            s.harmonics.push_back(rng.uniform(0.0, 0.25 / (k - 1)));
            s.harmonics.push_back(rng.uniform(0.0, 2.0 * std::numbers::pi));
        }
    }
    return s;
}

} // namespace

bool ShapeInstance::covers(int row, int col) const
{
    const double dy = (row - center.row) / half_height;
    const double dx = (col - center.col) / half_width;
    switch (kind) {
    case ShapeKind::Rectangle:
        return std::abs(row - center.row) <= half_height && std::abs(col - center.col) <= half_width;
    case ShapeKind::Ellipse:
        return dy * dy + dx * dx <= 1.0;
    case ShapeKind::Blob: {
        double radius = 1.0;
        const double theta = std::atan2(dy, dx);
        for (std::size_t i = 0; i + 1 < harmonics.size(); i += 2) {
            radius += harmonics[i] * std::cos(static_cast<double>(i / 2 + 2) * theta + harmonics[i + 1]);
        }
        radius = std::max(radius, 0.3);
        return dy * dy + dx * dx <= radius * radius;
    }
    }
    return false;
}

CategoryTable synth_categories()
{
    return CategoryTable({{1, "person", true},
                          {2, "vehicle", true},
                          {3, "animal", true},
                          {11, "sky", false},
                          {12, "road", false},
                          {13, "grass", false}});
}

namespace {

struct Box {
    int y0, y1, x0, x1; // inclusive, clipped
};

Box bounds(const ShapeInstance& s, int height, int width)
{
    // Blob radius is at most 1 + sum of amplitudes <= 1.5 of the base half-size.
    const double grow = s.kind == ShapeKind::Blob ? 1.5 : 1.0;
    return {std::max(0, static_cast<int>(std::floor(s.center.row - grow * s.half_height))),
            std::min(height - 1, static_cast<int>(std::ceil(s.center.row + grow * s.half_height))),
            std::max(0, static_cast<int>(std::floor(s.center.col - grow * s.half_width))),
            std::min(width - 1, static_cast<int>(std::ceil(s.center.col + grow * s.half_width)))};
}

} // namespace

PanopticAnnotation paint_scene(int height, int width, const std::vector<StuffBand>& bands,
                               const std::vector<ShapeInstance>& instances)
{
    PanopticAnnotation ann;
    ann.ids = Plane<SegmentId>(height, width, 0);
    SegmentId next = 1;
    for (std::size_t b = 0; b < bands.size(); ++b) {
        const int end = b + 1 < bands.size() ? bands[b + 1].first_row : height;
        const SegmentId id = next++;
        ann.segments[id] = {bands[b].category, false};
        for (int y = std::max(0, bands[b].first_row); y < std::min(end, height); ++y) {
            for (SegmentId& v : ann.ids.row(y)) {
                v = id;
            }
        }
    }

    // Paint with provisional ids, then renumber the survivors densely.
    const SegmentId first_thing = next;
    for (std::size_t i = 0; i < instances.size(); ++i) {
        const Box box = bounds(instances[i], height, width);
        const SegmentId id = first_thing + static_cast<SegmentId>(i);
        for (int y = box.y0; y <= box.y1; ++y) {
            for (int x = box.x0; x <= box.x1; ++x) {
                if (instances[i].covers(y, x)) {
                    ann.ids(y, x) = id;
                }
            }
        }
    }
    std::vector<std::int64_t> visible(instances.size(), 0);
    for (SegmentId v : ann.ids.values()) {
        if (v >= first_thing) {
            ++visible[v - first_thing];
        }
    }
    std::vector<SegmentId> renumber(instances.size(), 0);
    for (std::size_t i = 0; i < instances.size(); ++i) {
        if (visible[i] > 0) {
            renumber[i] = next;
            ann.segments[next] = {instances[i].category, true};
            ++next;
        }
    }
    for (SegmentId& v : ann.ids.values()) {
        if (v >= first_thing) {
            v = renumber[v - first_thing];
        }
    }
    return ann;
}

std::uint64_t mix_seed(std::uint64_t seed) noexcept
{
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

PanopticAnnotation generate(const SceneSpec& spec)
{
    if (spec.height < 1 || spec.width < 1) {
        throw DomainError("scene must be at least 1x1");
    }
    if (spec.min_instances < 0 || spec.max_instances < spec.min_instances) {
        throw DomainError("invalid instance count range");
    }
    if (spec.min_scale < 1 || spec.max_scale < spec.min_scale) {
        throw DomainError("invalid instance scale range");
    }
    if (spec.stuff_bands < 1 || spec.stuff_bands > 3 || spec.stuff_bands > spec.height) {
        throw DomainError("stuff_bands must be between 1 and 3 and at most the height");
    }
    Rng rng(spec.seed);

    std::vector<StuffBand> bands;
    std::vector<CategoryId> stuff(std::begin(kStuff), std::end(kStuff));
    for (int b = 0; b < spec.stuff_bands; ++b) {
        const int pick = rng.integer(b, 2);
        std::swap(stuff[static_cast<std::size_t>(b)], stuff[static_cast<std::size_t>(pick)]);
    }
    // Band boundaries at random rows, kept at least height / (2 * bands) apart.
    const int min_gap = std::max(1, spec.height / (2 * spec.stuff_bands));
    int row = 0;
    for (int b = 0; b < spec.stuff_bands; ++b) {
        bands.push_back({row, stuff[static_cast<std::size_t>(b)]});
        const int remaining = spec.stuff_bands - b - 1;
        if (remaining > 0) {
            const int lo = row + min_gap;
            const int hi = std::max(lo, spec.height - remaining * min_gap);
            row = rng.integer(lo, hi);
        }
    }

    const int wanted = rng.integer(spec.min_instances, spec.max_instances);
    std::vector<ShapeInstance> placed;
    Plane<std::int32_t> owner(spec.height, spec.width, -1);
    std::vector<std::int64_t> area;
    for (int n = 0; n < wanted; ++n) {
        for (int attempt = 0; attempt < spec.placement_attempts; ++attempt) {
            ShapeInstance s = random_shape(spec, rng);
            const Box box = bounds(s, spec.height, spec.width);
            std::vector<std::int64_t> hidden(placed.size(), 0);
            std::int64_t own = 0;
            for (int y = box.y0; y <= box.y1; ++y) {
                for (int x = box.x0; x <= box.x1; ++x) {
                    if (s.covers(y, x)) {
                        ++own;
                        if (owner(y, x) >= 0) {
                            ++hidden[static_cast<std::size_t>(owner(y, x))];
                        }
                    }
                }
            }
            if (own == 0) {
                continue;
            }
            bool ok = true;
            for (std::size_t i = 0; i < placed.size() && ok; ++i) {
                if (spec.occlusion == Occlusion::None) {
                    ok = hidden[i] == 0;
                } else {
                    ok = static_cast<double>(hidden[i]) <= spec.max_hidden_fraction * static_cast<double>(area[i]);
                }
            }
            if (!ok) {
                continue;
            }
            const auto id = static_cast<std::int32_t>(placed.size());
            for (int y = box.y0; y <= box.y1; ++y) {
                for (int x = box.x0; x <= box.x1; ++x) {
                    if (s.covers(y, x)) {
                        if (owner(y, x) >= 0) {
                            --area[static_cast<std::size_t>(owner(y, x))];
                        }
                        owner(y, x) = id;
                    }
                }
            }
            placed.push_back(std::move(s));
            area.push_back(own);
            break;
        }
    }
    if (spec.min_instances > 0 && placed.empty()) {
        throw DomainError("could not place any instance");
    }
    return paint_scene(spec.height, spec.width, bands, placed);
}

} // namespace pcv
