#include "frd/image.hpp"

#include "frd/error.hpp"

#include <algorithm>

namespace frd {

Grid::Grid(std::size_t height, std::size_t width, std::vector<double> data)
    : height_(height), width_(width), data_(std::move(data)) {
    if (data_.size() != height_ * width_) {
        throw Error(ErrorKind::DimError, "grid data has " + std::to_string(data_.size()) +
                                             " values, expected " + std::to_string(height_ * width_));
    }
}

void ImageSet::canonicalize_order() {
    std::sort(images.begin(), images.end(),
              [](const Image& a, const Image& b) { return a.id < b.id; });
    auto dup = std::adjacent_find(images.begin(), images.end(),
                                  [](const Image& a, const Image& b) { return a.id == b.id; });
    if (dup != images.end()) {
        throw Error(ErrorKind::FileError, "duplicate image id '" + dup->id + "' in set '" + name + "'");
    }
}

}  // namespace frd
