/**
 * @file imageio.hpp
 * @brief Reading and writing grayscale images, and resampling them onto the
 *        square analysis grid.
 *
 * Supported formats, selected by extension:
 *   .png     8- or 16-bit single-channel PNG
 *   .pgm     binary (P5) or ASCII (P2) PGM, maxval up to 65535
 *   .rawf32  two little-endian u32 (height, width) then height*width
 *            little-endian f32 values, row-major
 *
 * Intensities are divided by the format maximum (255 or 65535, or the PGM
 * maxval); raw floats are clipped to [0,1].
 */
#pragma once

#include "frd/image.hpp"

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>

namespace frd {

inline constexpr std::size_t kDefaultImageSize = 256;

enum class ImageFormat { Png, Pgm, RawF32 };

bool is_supported_image(const std::filesystem::path& path);

/// Reads one file into an image with intensities in [0,1] and id = file stem.
/// Multi-channel inputs raise ChannelError; unreadable files raise FileError.
/// A bit depth hint (1..16) overrides the integer divisor, e.g. 12 for 12-bit
/// data stored in 16-bit containers; larger values are clipped to 1.
Image load_image(const std::filesystem::path& path, std::optional<int> bit_depth_hint = std::nullopt);

/// Bilinear resampling with corner-aligned sample positions: output pixel
/// (r, c) samples source coordinate (r*(H-1)/(H'-1), c*(W-1)/(W'-1)).
Grid resize_bilinear(const Grid& src, std::size_t out_height, std::size_t out_width);

/// Loads every supported file in `dir`, resizes each to target_size squared
/// and returns the set sorted by id. Files with other extensions are ignored.
ImageSet load_image_set(const std::filesystem::path& dir, std::size_t target_size = kDefaultImageSize,
                        std::optional<int> bit_depth_hint = std::nullopt, std::size_t workers = 0);

/// Writes with the format implied by the extension. PNG and PGM are written
/// at 16 bits; values are clipped to [0,1] and rounded to the nearest level.
void write_image(const Image& img, const std::filesystem::path& path);

}  // namespace frd
