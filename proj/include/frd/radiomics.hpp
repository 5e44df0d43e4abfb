/**
 * @file radiomics.hpp
 * @brief Radiomic feature extractors: first-order statistics and the five
 *        gray-level texture matrices (GLCM, GLRLM, GLSZM, GLDM, NGTDM).
 *
 * All texture matrices are indexed by the discretized gray level (1-based)
 * and the formulas follow the IBSI definitions; docs/features.md restates
 * each one. Entropies are base 2 with 0*log(0) = 0. Any ratio whose
 * denominator is zero evaluates to 0 unless a different fallback is stated
 * next to the feature.
 */
#pragma once

#include "frd/catalog.hpp"
#include "frd/feature_matrix.hpp"
#include "frd/image.hpp"
#include "frd/wavelet.hpp"

#include <Eigen/Dense>

#include <array>
#include <cstddef>
#include <vector>

namespace frd {

inline constexpr int kDefaultBinCount = 32;

inline constexpr std::size_t kFirstOrderCount = 18;
inline constexpr std::size_t kGlcmCount = 24;
inline constexpr std::size_t kGlrlmCount = 16;
inline constexpr std::size_t kGlszmCount = 16;
inline constexpr std::size_t kGldmCount = 14;
inline constexpr std::size_t kNgtdmCount = 5;
inline constexpr std::size_t kFeaturesPerVariant =
    kFirstOrderCount + kGlcmCount + kGlrlmCount + kGlszmCount + kGldmCount + kNgtdmCount;

/// Fallback for NGTDM Coarseness when sum(p_i * s_i) is zero.
inline constexpr double kCoarsenessCap = 1e6;

using FirstOrderFeatures = std::array<double, kFirstOrderCount>;
using GlcmFeatures = std::array<double, kGlcmCount>;
using GlrlmFeatures = std::array<double, kGlrlmCount>;
using GlszmFeatures = std::array<double, kGlszmCount>;
using GldmFeatures = std::array<double, kGldmCount>;
using NgtdmFeatures = std::array<double, kNgtdmCount>;

/// Integer gray levels in [1, bin_count].
struct DiscretizedImage {
    std::size_t height = 0;
    std::size_t width = 0;
    int bin_count = 0;
    std::vector<int> levels;  // row-major

    int operator()(std::size_t row, std::size_t col) const { return levels[row * width + col]; }
    /// Number of distinct levels that occur.
    int present_levels() const;
};

/// level = min(floor((p - min) / (max - min) * bins) + 1, bins) using the
/// grid's own min and max; a constant grid maps to level 1 everywhere.
/// ParamError when bin_count < 2.
DiscretizedImage discretize(const Grid& grid, int bin_count);

/// Neighbour offsets (drow, dcol) for the four co-occurrence / run
/// directions: 0, 45, 90 and 135 degrees.
enum class Direction { Deg0, Deg45, Deg90, Deg135 };
inline constexpr std::array<Direction, 4> kAllDirections{
    Direction::Deg0, Direction::Deg45, Direction::Deg90, Direction::Deg135};
std::array<int, 2> direction_offset(Direction d);

FirstOrderFeatures first_order_features(const Grid& grid, int bin_count);

/// Symmetric distance-1 co-occurrence probabilities, bin_count x bin_count,
/// entry (i-1, j-1) for levels i, j. All zeros if the direction has no pairs.
Eigen::MatrixXd glcm_matrix(const DiscretizedImage& d, Direction dir);
GlcmFeatures glcm_features(const DiscretizedImage& d, Direction dir);
/// Mean over the directions that contain at least one pair.
GlcmFeatures glcm_features(const DiscretizedImage& d);

/// Run counts, bin_count x max_run_length, entry (i-1, len-1).
Eigen::MatrixXd glrlm_matrix(const DiscretizedImage& d, Direction dir);
GlrlmFeatures glrlm_features(const DiscretizedImage& d, Direction dir);
GlrlmFeatures glrlm_features(const DiscretizedImage& d);

/// Zones are 8-connected components of equal level. Counts, bin_count x
/// largest zone size, entry (i-1, size-1).
Eigen::MatrixXd glszm_matrix(const DiscretizedImage& d);
GlszmFeatures glszm_features(const DiscretizedImage& d);

/// Dependence of a pixel is 1 + the number of 8-neighbours (inside the
/// image) with exactly the same level. Counts, bin_count x 9, entry
/// (i-1, dependence-1).
Eigen::MatrixXd gldm_matrix(const DiscretizedImage& d);
GldmFeatures gldm_features(const DiscretizedImage& d);

struct NgtdmTable {
    std::vector<double> count;   // n_i, size bin_count, index i-1
    std::vector<double> s;       // s_i = sum |i - mean of 8-neighbours|
    double valid_pixels = 0.0;   // pixels with at least one neighbour
};
NgtdmTable ngtdm_table(const DiscretizedImage& d);
NgtdmFeatures ngtdm_features(const DiscretizedImage& d);

/// All 93 features of one filtered grid in catalog family order.
std::array<double, kFeaturesPerVariant> variant_features(const Grid& grid, int bin_count);

struct ExtractOptions {
    int bin_count = kDefaultBinCount;
    WaveletKernel kernel = WaveletKernel::haar();
    std::size_t workers = 0;  // 0 = default_worker_count()
};

/// Feature row of one image restricted to `catalog`.
std::vector<double> extract_image_features(const Grid& pixels, const FeatureCatalog& catalog,
                                           int bin_count, const WaveletKernel& kernel);

/// One row per image in set order. InternalError names the image, variant
/// and feature if any value is non-finite; EmptyInput for an empty set.
FeatureMatrix extract_features(const ImageSet& set, const FeatureCatalog& catalog,
                               const ExtractOptions& options = {});

}  // namespace frd
