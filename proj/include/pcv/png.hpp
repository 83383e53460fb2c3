#pragma once

#include "pcv/error.hpp"

#include <cstdint>
#include <filesystem>
#include <vector>

namespace pcv {

/// Error while reading or writing files.
class IoError : public Error {
public:
    enum class Kind { MissingFile, MalformedPng, MalformedJson, MissingImage, IdMismatch, AreaMismatch, Unwritable, MalformedTensor };

    IoError(Kind kind, const std::string& what) : Error(what), kind_(kind) {}
    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

/// 8-bit interleaved RGB image.
struct RgbImage {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> pixels; ///< 3 bytes per pixel, row-major
};

/// Decodes any 8- or 16-bit PNG to 8-bit RGB (alpha dropped, palettes expanded).
RgbImage read_png(const std::filesystem::path& path);
void write_png(const std::filesystem::path& path, const RgbImage& image);
void write_png_gray(const std::filesystem::path& path, int width, int height, const std::vector<std::uint8_t>& gray);

} // namespace pcv
