/**
 * @file image.hpp
 * @brief Grayscale image containers.
 */
#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace frd {

/// Row-major real-valued grid. Used for images and for filter outputs,
/// which are not bounded to [0,1].
class Grid {
public:
    Grid() = default;
    Grid(std::size_t height, std::size_t width, double fill = 0.0)
        : height_(height), width_(width), data_(height * width, fill) {}
    Grid(std::size_t height, std::size_t width, std::vector<double> data);

    std::size_t height() const noexcept { return height_; }
    std::size_t width() const noexcept { return width_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    double& operator()(std::size_t row, std::size_t col) { return data_[row * width_ + col]; }
    double operator()(std::size_t row, std::size_t col) const { return data_[row * width_ + col]; }

    std::span<double> values() noexcept { return data_; }
    std::span<const double> values() const noexcept { return data_; }

    bool operator==(const Grid&) const = default;

private:
    std::size_t height_ = 0;
    std::size_t width_ = 0;
    std::vector<double> data_;
};

struct Image {
    std::string id;
    Grid pixels;

    std::size_t height() const noexcept { return pixels.height(); }
    std::size_t width() const noexcept { return pixels.width(); }

    bool operator==(const Image&) const = default;
};

/// Images sorted by id; ids are unique.
struct ImageSet {
    std::string name;
    std::vector<Image> images;

    std::size_t size() const noexcept { return images.size(); }
    bool empty() const noexcept { return images.empty(); }

    /// Sorts by id and rejects duplicates (FileError).
    void canonicalize_order();

    bool operator==(const ImageSet&) const = default;
};

}  // namespace frd
