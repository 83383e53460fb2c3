#pragma once

// COCO panoptic archives: a JSON index plus one PNG per image where the
// segment id of a pixel is R + 256 G + 256^2 B (0 = void).

#include "pcv/panoptic.hpp"
#include "pcv/png.hpp"

#include <json.hpp>

#include <filesystem>
#include <mutex>
#include <string>
#include <vector>

namespace pcv {

SegmentId rgb_to_id(std::uint8_t r, std::uint8_t g, std::uint8_t b) noexcept;
void id_to_rgb(SegmentId id, std::uint8_t rgb[3]) noexcept;

struct ArchiveImage {
    std::int64_t id = 0;
    std::string file_name; ///< PNG file name inside the PNG directory
    int width = 0;
    int height = 0;
};

class PanopticArchive {
public:
    /// Loads the JSON index. PNGs are looked up in `png_dir`, which defaults to
    /// the JSON path without its extension (the COCO layout).
    static PanopticArchive open(const std::filesystem::path& json_path, std::filesystem::path png_dir = {});

    const CategoryTable& categories() const noexcept { return categories_; }
    const std::vector<ArchiveImage>& images() const noexcept { return images_; }
    const std::filesystem::path& png_dir() const noexcept { return png_dir_; }

    /// Reads one image. Throws IoError with kind MissingImage, MalformedPng,
    /// IdMismatch (PNG and JSON disagree on the id set) or AreaMismatch.
    /// `downsample` > 1 applies nearest-neighbor downsampling afterwards.
    PanopticAnnotation read_annotation(std::int64_t image_id, int downsample = 1) const;

private:
    std::filesystem::path png_dir_;
    CategoryTable categories_;
    std::vector<ArchiveImage> images_;
    std::map<std::int64_t, nlohmann::json> annotations_; // by image id
};

/// Accumulates predictions and writes the JSON index on finish(). Entries are
/// written in image-id order; write_prediction may be called concurrently.
class ArchiveWriter {
public:
    ArchiveWriter(std::filesystem::path json_path, std::filesystem::path png_dir, CategoryTable categories);

    /// Writes `<png_dir>/<name>.png` and records the segments. Throws IoError(Unwritable).
    void write_prediction(const PanopticMap& map, std::int64_t image_id, const std::string& name);

    /// Writes the JSON index; returns its path.
    std::filesystem::path finish();

private:
    std::filesystem::path json_path_;
    std::filesystem::path png_dir_;
    CategoryTable categories_;
    std::mutex mutex_;
    std::map<std::int64_t, std::pair<nlohmann::ordered_json, nlohmann::ordered_json>> entries_;
};

nlohmann::ordered_json categories_json(const CategoryTable& categories);
CategoryTable parse_categories(const nlohmann::json& list);

} // namespace pcv
