#include "pcv/panoptic.hpp"

#include "pcv/error.hpp"

#include <algorithm>
#include <set>

namespace pcv {

CategoryTable::CategoryTable(std::vector<Category> categories) : categories_(std::move(categories))
{
    std::sort(categories_.begin(), categories_.end(),
              [](const Category& a, const Category& b) { return a.id < b.id; });
    for (std::size_t i = 1; i < categories_.size(); ++i) {
        if (categories_[i].id == categories_[i - 1].id) {
            throw Error("duplicate category id " + std::to_string(categories_[i].id));
        }
    }
}

const Category* CategoryTable::find(CategoryId id) const noexcept
{
    auto it = std::lower_bound(categories_.begin(), categories_.end(), id,
                               [](const Category& c, CategoryId v) { return c.id < v; });
    return it != categories_.end() && it->id == id ? &*it : nullptr;
}

bool CategoryTable::is_thing(CategoryId id) const noexcept
{
    const Category* c = find(id);
    return c != nullptr && c->is_thing;
}

void PanopticAnnotation::validate() const
{
    std::map<SegmentId, std::int64_t> area;
    for (SegmentId id : ids.values()) {
        if (id != 0) {
            ++area[id];
        }
    }
    for (const auto& [id, n] : area) {
        if (!segments.contains(id)) {
            throw Error("segment id " + std::to_string(id) + " has no segment record");
        }
    }
    for (const auto& [id, info] : segments) {
        if (id == 0) {
            throw Error("segment id 0 is reserved for unlabeled pixels");
        }
        if (info.is_thing && !area.contains(id)) {
            throw Error("thing segment " + std::to_string(id) + " is empty");
        }
    }
}

const Segment* PanopticMap::find(SegmentId id) const noexcept
{
    for (const Segment& s : segments) {
        if (s.id == id) {
            return &s;
        }
    }
    return nullptr;
}

Plane<SegmentId> PanopticMap::segment_ids() const
{
    std::map<CategoryId, SegmentId> stuff_id;
    for (const Segment& s : segments) {
        if (!s.is_thing) {
            stuff_id.emplace(s.category, s.id);
        }
    }
    Plane<SegmentId> out(height(), width(), 0);
    for (int y = 0; y < height(); ++y) {
        for (int x = 0; x < width(); ++x) {
            if (instance_id(y, x) != 0) {
                out(y, x) = instance_id(y, x);
            } else if (category(y, x) != kVoidCategory) {
                auto it = stuff_id.find(category(y, x));
                out(y, x) = it == stuff_id.end() ? 0 : it->second;
            }
        }
    }
    return out;
}

void PanopticMap::validate() const
{
    if (instance_id.height() != category.height() || instance_id.width() != category.width()) {
        throw Error("panoptic map planes differ in size");
    }
    std::set<SegmentId> ids;
    std::set<CategoryId> stuff_categories;
    for (const Segment& s : segments) {
        if (s.id == 0 || !ids.insert(s.id).second) {
            throw Error("segment id " + std::to_string(s.id) + " is zero or duplicated");
        }
        if (!s.is_thing && !stuff_categories.insert(s.category).second) {
            throw Error("category " + std::to_string(s.category) + " has two stuff segments");
        }
    }
    std::map<SegmentId, std::int64_t> area;
    const Plane<SegmentId> seg = segment_ids();
    for (int y = 0; y < height(); ++y) {
        for (int x = 0; x < width(); ++x) {
            const SegmentId iid = instance_id(y, x);
            if (iid != 0) {
                const Segment* s = find(iid);
                if (s == nullptr || !s->is_thing) {
                    throw Error("instance id " + std::to_string(iid) + " is not a listed thing segment");
                }
                if (s->category != category(y, x)) {
                    throw Error("instance " + std::to_string(iid) + " disagrees with the category map");
                }
            }
            if (seg(y, x) != 0) {
                ++area[seg(y, x)];
            } else if (category(y, x) != kVoidCategory) {
                throw Error("stuff pixel of category " + std::to_string(category(y, x)) +
                            " has no segment");
            }
        }
    }
    for (const Segment& s : segments) {
        auto it = area.find(s.id);
        const std::int64_t n = it == area.end() ? 0 : it->second;
        if (n != s.area) {
            throw Error("segment " + std::to_string(s.id) + " area " + std::to_string(s.area) +
                        " does not match its " + std::to_string(n) + " pixels");
        }
    }
}

PanopticMap to_panoptic_map(const PanopticAnnotation& ann)
{
    PanopticMap map;
    map.category = Plane<CategoryId>(ann.height(), ann.width(), kVoidCategory);
    map.instance_id = Plane<SegmentId>(ann.height(), ann.width(), 0);

    std::map<CategoryId, SegmentId> stuff_owner;
    for (const auto& [id, info] : ann.segments) {
        if (!info.is_thing) {
            stuff_owner.emplace(info.category, id); // map order: smallest id wins
        }
    }

    std::map<SegmentId, std::int64_t> area;
    for (int y = 0; y < ann.height(); ++y) {
        for (int x = 0; x < ann.width(); ++x) {
            const SegmentId id = ann.ids(y, x);
            if (id == 0) {
                continue;
            }
            const SegmentInfo& info = ann.segments.at(id);
            map.category(y, x) = info.category;
            if (info.is_thing) {
                map.instance_id(y, x) = id;
                ++area[id];
            } else {
                ++area[stuff_owner.at(info.category)];
            }
        }
    }
    for (const auto& [id, n] : area) {
        const SegmentInfo& info = ann.segments.at(id);
        map.segments.push_back({id, info.category, n, info.is_thing});
    }
    return map;
}

PanopticAnnotation to_annotation(const PanopticMap& map)
{
    PanopticAnnotation ann;
    ann.ids = map.segment_ids();
    for (const Segment& s : map.segments) {
        ann.segments[s.id] = {s.category, s.is_thing};
    }
    return ann;
}

PanopticAnnotation downsample_annotation(const PanopticAnnotation& ann, int factor)
{
    PanopticAnnotation out;
    out.ids = downsample_nearest(ann.ids, factor);
    std::set<SegmentId> present(out.ids.values().begin(), out.ids.values().end());
    for (const auto& [id, info] : ann.segments) {
        if (present.contains(id)) {
            out.segments.emplace(id, info);
        }
    }
    return out;
}

PanopticMap upsample_map(const PanopticMap& map, int factor, int height, int width)
{
    PanopticMap out;
    out.category = upsample_nearest(map.category, factor, height, width);
    out.instance_id = upsample_nearest(map.instance_id, factor, height, width);
    out.segments = map.segments;
    const Plane<SegmentId> seg = out.segment_ids();
    std::map<SegmentId, std::int64_t> area;
    for (SegmentId id : seg.values()) {
        if (id != 0) {
            ++area[id];
        }
    }
    std::erase_if(out.segments, [&](Segment& s) {
        auto it = area.find(s.id);
        if (it == area.end()) {
            return true;
        }
        s.area = it->second;
        return false;
    });
    return out;
}

} // namespace pcv
