#include "pcv/panoptic_io.hpp"

#include <climits>
#include <fstream>
#include <set>

namespace pcv {

SegmentId rgb_to_id(std::uint8_t r, std::uint8_t g, std::uint8_t b) noexcept
{
    return static_cast<SegmentId>(r) + 256u * static_cast<SegmentId>(g) + 65536u * static_cast<SegmentId>(b);
}

void id_to_rgb(SegmentId id, std::uint8_t rgb[3]) noexcept
{
    rgb[0] = static_cast<std::uint8_t>(id & 0xff);
    rgb[1] = static_cast<std::uint8_t>((id >> 8) & 0xff);
    rgb[2] = static_cast<std::uint8_t>((id >> 16) & 0xff);
}

nlohmann::ordered_json categories_json(const CategoryTable& categories)
{
    nlohmann::ordered_json out = nlohmann::ordered_json::array();
    for (const Category& c : categories.all()) {
        out.push_back({{"id", c.id}, {"name", c.name}, {"isthing", c.is_thing ? 1 : 0}});
    }
    return out;
}

CategoryTable parse_categories(const nlohmann::json& list)
{
    if (!list.is_array()) {
        throw IoError(IoError::Kind::MalformedJson, "categories is not a list");
    }
    std::vector<Category> cats;
    try {
        for (const auto& c : list) {
            const auto& thing = c.at("isthing");
            cats.push_back({c.at("id").get<int>(), c.value("name", std::string{}),
                            thing.is_boolean() ? thing.get<bool>() : thing.get<int>() != 0});
        }
        return CategoryTable(std::move(cats));
    } catch (const nlohmann::json::exception& e) {
        throw IoError(IoError::Kind::MalformedJson, std::string("bad category record: ") + e.what());
    } catch (const Error& e) {
        throw IoError(IoError::Kind::MalformedJson, e.what());
    }
}

PanopticArchive PanopticArchive::open(const std::filesystem::path& json_path, std::filesystem::path png_dir)
{
    std::ifstream in(json_path);
    if (!in) {
        throw IoError(IoError::Kind::MissingFile, "cannot open " + json_path.string());
    }
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw IoError(IoError::Kind::MalformedJson, json_path.string() + ": " + e.what());
    }

    PanopticArchive a;
    a.png_dir_ = png_dir.empty() ? std::filesystem::path(json_path).replace_extension() : std::move(png_dir);
    try {
        a.categories_ = parse_categories(doc.at("categories"));
        std::map<std::int64_t, std::pair<int, int>> sizes;
        for (const auto& im : doc.value("images", nlohmann::json::array())) {
            sizes[im.at("id").get<std::int64_t>()] = {im.value("width", 0), im.value("height", 0)};
        }
        for (const auto& ann : doc.at("annotations")) {
            ArchiveImage img;
            img.id = ann.at("image_id").get<std::int64_t>();
            img.file_name = ann.at("file_name").get<std::string>();
            if (auto it = sizes.find(img.id); it != sizes.end()) {
                img.width = it->second.first;
                img.height = it->second.second;
            }
            a.images_.push_back(img);
            a.annotations_[img.id] = ann;
        }
    } catch (const nlohmann::json::exception& e) {
        throw IoError(IoError::Kind::MalformedJson, json_path.string() + ": " + e.what());
    }
    return a;
}

PanopticAnnotation PanopticArchive::read_annotation(std::int64_t image_id, int downsample) const
{
    auto it = annotations_.find(image_id);
    if (it == annotations_.end()) {
        throw IoError(IoError::Kind::MissingImage, "no annotation for image " + std::to_string(image_id));
    }
    const nlohmann::json& ann = it->second;
    const std::filesystem::path png_path = png_dir_ / ann.at("file_name").get<std::string>();
    if (!std::filesystem::exists(png_path)) {
        throw IoError(IoError::Kind::MissingImage, "missing PNG " + png_path.string());
    }
    const RgbImage rgb = read_png(png_path);

    PanopticAnnotation out;
    out.ids = Plane<SegmentId>(rgb.height, rgb.width, 0);
    std::map<SegmentId, std::int64_t> area;
    for (std::size_t i = 0; i < out.ids.size(); ++i) {
        const SegmentId id = rgb_to_id(rgb.pixels[3 * i], rgb.pixels[3 * i + 1], rgb.pixels[3 * i + 2]);
        out.ids.values()[i] = id;
        if (id != 0) {
            ++area[id];
        }
    }

    std::map<SegmentId, std::int64_t> listed_area;
    try {
        for (const auto& seg : ann.at("segments_info")) {
            const auto id = seg.at("id").get<SegmentId>();
            const CategoryId cat = seg.at("category_id").get<CategoryId>();
            const Category* info = categories_.find(cat);
            if (info == nullptr) {
                throw IoError(IoError::Kind::MalformedJson, "segment " + std::to_string(id) + " has unknown category " +
                                                                 std::to_string(cat));
            }
            out.segments[id] = {cat, info->is_thing};
            if (seg.contains("area")) {
                listed_area[id] = seg.at("area").get<std::int64_t>();
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw IoError(IoError::Kind::MalformedJson, std::string("bad segments_info: ") + e.what());
    }

    for (const auto& [id, n] : area) {
        if (!out.segments.contains(id)) {
            throw IoError(IoError::Kind::IdMismatch, "PNG id " + std::to_string(id) + " of image " +
                                                         std::to_string(image_id) + " is not in segments_info");
        }
    }
    for (const auto& [id, info] : out.segments) {
        auto a = area.find(id);
        if (a == area.end()) {
            throw IoError(IoError::Kind::IdMismatch, "segment " + std::to_string(id) + " of image " +
                                                         std::to_string(image_id) + " does not appear in the PNG");
        }
        auto l = listed_area.find(id);
        if (l != listed_area.end() && l->second != a->second) {
            throw IoError(IoError::Kind::AreaMismatch, "segment " + std::to_string(id) + " lists area " +
                                                           std::to_string(l->second) + " but covers " +
                                                           std::to_string(a->second) + " pixels");
        }
    }
    return downsample > 1 ? downsample_annotation(out, downsample) : out;
}

ArchiveWriter::ArchiveWriter(std::filesystem::path json_path, std::filesystem::path png_dir, CategoryTable categories)
    : json_path_(std::move(json_path)), png_dir_(std::move(png_dir)), categories_(std::move(categories))
{
}

void ArchiveWriter::write_prediction(const PanopticMap& map, std::int64_t image_id, const std::string& name)
{
    std::error_code ec;
    {
        std::lock_guard lock(mutex_);
        std::filesystem::create_directories(png_dir_, ec);
    }
    if (ec) {
        throw IoError(IoError::Kind::Unwritable, "cannot create " + png_dir_.string() + ": " + ec.message());
    }
    const Plane<SegmentId> ids = map.segment_ids();
    RgbImage rgb{map.width(), map.height(), std::vector<std::uint8_t>(ids.size() * 3)};
    struct Bounds {
        int y0 = INT32_MAX, x0 = INT32_MAX, y1 = -1, x1 = -1;
    };
    std::map<SegmentId, Bounds> bounds;
    for (int y = 0; y < map.height(); ++y) {
        for (int x = 0; x < map.width(); ++x) {
            const SegmentId id = ids(y, x);
            id_to_rgb(id, &rgb.pixels[(static_cast<std::size_t>(y) * map.width() + x) * 3]);
            if (id != 0) {
                Bounds& b = bounds[id];
                b.y0 = std::min(b.y0, y);
                b.x0 = std::min(b.x0, x);
                b.y1 = std::max(b.y1, y);
                b.x1 = std::max(b.x1, x);
            }
        }
    }
    const std::string file_name = name + ".png";
    write_png(png_dir_ / file_name, rgb);

    nlohmann::ordered_json segments = nlohmann::ordered_json::array();
    for (const Segment& s : map.segments) {
        const Bounds b = bounds.count(s.id) ? bounds.at(s.id) : Bounds{0, 0, -1, -1};
        segments.push_back({{"id", s.id},
                            {"category_id", s.category},
                            {"area", s.area},
                            {"bbox", {b.x0, b.y0, b.x1 - b.x0 + 1, b.y1 - b.y0 + 1}},
                            {"iscrowd", 0}});
    }
    nlohmann::ordered_json image = {
        {"id", image_id}, {"file_name", name + ".jpg"}, {"width", map.width()}, {"height", map.height()}};
    nlohmann::ordered_json annotation = {{"image_id", image_id}, {"file_name", file_name}, {"segments_info", segments}};
    std::lock_guard lock(mutex_);
    if (!entries_.emplace(image_id, std::make_pair(std::move(image), std::move(annotation))).second) {
        throw IoError(IoError::Kind::Unwritable, "image id " + std::to_string(image_id) + " written twice");
    }
}

std::filesystem::path ArchiveWriter::finish()
{
    std::lock_guard lock(mutex_);
    nlohmann::ordered_json images = nlohmann::ordered_json::array();
    nlohmann::ordered_json annotations = nlohmann::ordered_json::array();
    for (const auto& [id, entry] : entries_) {
        images.push_back(entry.first);
        annotations.push_back(entry.second);
    }
    nlohmann::ordered_json doc = {
        {"images", images}, {"annotations", annotations}, {"categories", categories_json(categories_)}};
    if (json_path_.has_parent_path()) {
        std::filesystem::create_directories(json_path_.parent_path());
    }
    std::ofstream out(json_path_);
    if (!out) {
        throw IoError(IoError::Kind::Unwritable, "cannot write " + json_path_.string());
    }
    out << doc.dump(2) << '\n';
    return json_path_;
}

} // namespace pcv
