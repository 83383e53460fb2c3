#pragma once

#include <algorithm>
#include <cassert>
#include <cstddef>
#include <span>
#include <vector>

namespace pcv {

/// Integer pixel coordinate (row, col).
struct Pixel {
    int row = 0;
    int col = 0;

    friend bool operator==(const Pixel&, const Pixel&) = default;
    friend auto operator<=>(const Pixel&, const Pixel&) = default;
};

/// Dense row-major 2-D array. All per-pixel maps in the pipeline use it.
template <class T>
class Plane {
public:
    Plane() = default;
    Plane(int height, int width, T fill = T{})
        : height_(height), width_(width),
          data_(static_cast<std::size_t>(height) * static_cast<std::size_t>(width), fill)
    {
        assert(height >= 0 && width >= 0);
    }

    int height() const noexcept { return height_; }
    int width() const noexcept { return width_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    bool contains(int row, int col) const noexcept
    {
        return row >= 0 && col >= 0 && row < height_ && col < width_;
    }

    T& operator()(int row, int col) noexcept
    {
        assert(contains(row, col));
        return data_[static_cast<std::size_t>(row) * width_ + col];
    }
    const T& operator()(int row, int col) const noexcept
    {
        assert(contains(row, col));
        return data_[static_cast<std::size_t>(row) * width_ + col];
    }
    T& operator()(Pixel p) noexcept { return (*this)(p.row, p.col); }
    const T& operator()(Pixel p) const noexcept { return (*this)(p.row, p.col); }

    std::span<T> row(int r) noexcept
    {
        return {data_.data() + static_cast<std::size_t>(r) * width_, static_cast<std::size_t>(width_)};
    }
    std::span<const T> row(int r) const noexcept
    {
        return {data_.data() + static_cast<std::size_t>(r) * width_, static_cast<std::size_t>(width_)};
    }

    T* data() noexcept { return data_.data(); }
    const T* data() const noexcept { return data_.data(); }
    std::span<T> values() noexcept { return data_; }
    std::span<const T> values() const noexcept { return data_; }

    void fill(T value) { std::fill(data_.begin(), data_.end(), value); }

    friend bool operator==(const Plane&, const Plane&) = default;

private:
    int height_ = 0;
    int width_ = 0;
    std::vector<T> data_;
};

} // namespace pcv
