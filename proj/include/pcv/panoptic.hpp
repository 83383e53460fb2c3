#pragma once

// Core panoptic data types shared by encoding, fusion, evaluation and I/O.

#include "pcv/plane.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace pcv {

using SegmentId = std::uint32_t;
using CategoryId = int;

/// Category value for void / unlabeled pixels in category maps.
inline constexpr CategoryId kVoidCategory = -1;

struct Category {
    CategoryId id = 0;
    std::string name;
    bool is_thing = false;

    friend bool operator==(const Category&, const Category&) = default;
};

class CategoryTable {
public:
    CategoryTable() = default;
    explicit CategoryTable(std::vector<Category> categories);

    const std::vector<Category>& all() const noexcept { return categories_; }
    const Category* find(CategoryId id) const noexcept;
    bool contains(CategoryId id) const noexcept { return find(id) != nullptr; }
    bool is_thing(CategoryId id) const noexcept;

    friend bool operator==(const CategoryTable&, const CategoryTable&) = default;

private:
    std::vector<Category> categories_; // sorted by id
};

struct SegmentInfo {
    CategoryId category = 0;
    bool is_thing = false;

    friend bool operator==(const SegmentInfo&, const SegmentInfo&) = default;
};

/// Ground-truth style annotation: a segment id per pixel (0 = unlabeled).
struct PanopticAnnotation {
    Plane<SegmentId> ids;
    std::map<SegmentId, SegmentInfo> segments;

    int height() const noexcept { return ids.height(); }
    int width() const noexcept { return ids.width(); }

    /// Throws Error when a nonzero id has no record or a thing segment is empty.
    void validate() const;
};

struct Segment {
    SegmentId id = 0;
    CategoryId category = 0;
    std::int64_t area = 0;
    bool is_thing = false;

    friend bool operator==(const Segment&, const Segment&) = default;
};

/// Pipeline output: category per pixel plus instance ids for things.
///
/// Stuff pixels carry instance id 0 and belong to the single stuff segment of
/// their category. Void pixels have category kVoidCategory.
struct PanopticMap {
    Plane<CategoryId> category;
    Plane<SegmentId> instance_id;
    std::vector<Segment> segments;

    int height() const noexcept { return category.height(); }
    int width() const noexcept { return category.width(); }

    const Segment* find(SegmentId id) const noexcept;

    /// Per-pixel segment id (thing instance id, stuff segment id, or 0 for void).
    Plane<SegmentId> segment_ids() const;

    /// Throws Error if the maps and segment list disagree.
    void validate() const;

    friend bool operator==(const PanopticMap&, const PanopticMap&) = default;
};

/// Converts an annotation into a map. Stuff segments sharing a category are
/// merged into one whole-category segment keeping the smallest id.
PanopticMap to_panoptic_map(const PanopticAnnotation& ann);

/// Inverse direction: pixels keep their segment ids.
PanopticAnnotation to_annotation(const PanopticMap& map);

/// Nearest-neighbor downsample: output pixel (y, x) samples input pixel
/// (y*f + f/2, x*f + f/2), clamped to the image. Output size is ceil(H/f) x ceil(W/f).
template <class T>
Plane<T> downsample_nearest(const Plane<T>& src, int factor)
{
    if (factor <= 1) {
        return src;
    }
    const int h = (src.height() + factor - 1) / factor;
    const int w = (src.width() + factor - 1) / factor;
    Plane<T> out(h, w);
    for (int y = 0; y < h; ++y) {
        const int sy = std::min(y * factor + factor / 2, src.height() - 1);
        for (int x = 0; x < w; ++x) {
            const int sx = std::min(x * factor + factor / 2, src.width() - 1);
            out(y, x) = src(sy, sx);
        }
    }
    return out;
}

/// Nearest-neighbor upsample by `factor`, cropped to height x width.
template <class T>
Plane<T> upsample_nearest(const Plane<T>& src, int factor, int height, int width)
{
    Plane<T> out(height, width);
    for (int y = 0; y < height; ++y) {
        const int sy = std::min(y / factor, src.height() - 1);
        for (int x = 0; x < width; ++x) {
            out(y, x) = src(sy, std::min(x / factor, src.width() - 1));
        }
    }
    return out;
}

/// Downsamples the id map; segments that vanish are dropped.
PanopticAnnotation downsample_annotation(const PanopticAnnotation& ann, int factor);

/// Upsamples both maps and recomputes segment areas; vanished segments are dropped.
PanopticMap upsample_map(const PanopticMap& map, int factor, int height, int width);

} // namespace pcv
