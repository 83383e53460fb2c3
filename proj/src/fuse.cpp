#include "pcv/fuse.hpp"

#include "pcv/error.hpp"

#include <map>

namespace pcv {

std::optional<CategoryId> assign_category(const InstanceMask& mask, const Plane<CategoryId>& semantic,
                                          const std::set<CategoryId>& thing_categories)
{
    std::map<CategoryId, std::int64_t> votes;
    for (const Pixel& p : mask.pixels) {
        const CategoryId c = semantic(p);
        if (thing_categories.contains(c)) {
            ++votes[c];
        }
    }
    std::optional<CategoryId> best;
    std::int64_t best_count = 0;
    for (const auto& [c, n] : votes) { // ascending ids: strict > keeps the lower id on ties
        if (n > best_count) {
            best = c;
            best_count = n;
        }
    }
    return best;
}

PanopticMap fuse(const std::vector<InstanceMask>& masks, const Plane<CategoryId>& semantic,
                 const CategoryTable& categories, const FuseOptions& options)
{
    const int h = semantic.height();
    const int w = semantic.width();
    std::set<CategoryId> things;
    for (const Category& c : categories.all()) {
        if (c.is_thing) {
            things.insert(c.id);
        }
    }

    PanopticMap out;
    out.category = Plane<CategoryId>(h, w, kVoidCategory);
    out.instance_id = Plane<SegmentId>(h, w, 0);

    SegmentId next_id = 1;
    for (const InstanceMask& mask : masks) {
        if (mask.pixels.empty()) {
            continue;
        }
        const auto category = assign_category(mask, semantic, things);
        if (!category) {
            continue;
        }
        const SegmentId id = next_id++;
        std::int64_t area = 0;
        for (const Pixel& p : mask.pixels) {
            if (out.instance_id(p) != 0) {
                throw Error("instance masks overlap at (" + std::to_string(p.row) + ", " + std::to_string(p.col) + ")");
            }
            out.instance_id(p) = id;
            out.category(p) = *category;
            ++area;
        }
        out.segments.push_back({id, *category, area, true});
    }

    std::map<CategoryId, std::int64_t> stuff_area;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (out.instance_id(y, x) != 0) {
                continue;
            }
            const CategoryId c = semantic(y, x);
            const Category* info = categories.find(c);
            if (info != nullptr && !info->is_thing) {
                ++stuff_area[c];
            }
        }
    }
    const std::int64_t scale2 = static_cast<std::int64_t>(options.scale) * options.scale;
    std::map<CategoryId, SegmentId> stuff_id;
    for (const auto& [c, area] : stuff_area) {
        if (area * scale2 < options.min_stuff_area) {
            continue;
        }
        const SegmentId id = next_id++;
        stuff_id.emplace(c, id);
        out.segments.push_back({id, c, area, false});
    }
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (out.instance_id(y, x) == 0 && stuff_id.contains(semantic(y, x))) {
                out.category(y, x) = semantic(y, x);
            }
        }
    }
    return out;
}

} // namespace pcv
