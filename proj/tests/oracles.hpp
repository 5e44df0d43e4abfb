/**
 * @file oracles.hpp
 * @brief Brute-force reference implementations used only by the tests.
 *
 * Each oracle enumerates the primitive objects (pixel pairs, runs, zones,
 * neighbourhoods) explicitly and evaluates the feature formulas from those
 * lists, without touching the library's matrix code.
 */
#pragma once

#include "frd/image.hpp"
#include "frd/radiomics.hpp"

#include <array>
#include <vector>

namespace frd::oracle {

std::vector<int> discretize(const Grid& grid, int bin_count);

FirstOrderFeatures first_order(const Grid& grid, int bin_count);
GlcmFeatures glcm(const DiscretizedImage& d);
GlcmFeatures glcm_direction(const DiscretizedImage& d, int dr, int dc);
GlrlmFeatures glrlm(const DiscretizedImage& d);
GlrlmFeatures glrlm_direction(const DiscretizedImage& d, int dr, int dc);
GlszmFeatures glszm(const DiscretizedImage& d);
GldmFeatures gldm(const DiscretizedImage& d);
NgtdmFeatures ngtdm(const DiscretizedImage& d);

/// Dense 2D correlation of the whole image with the outer product of a
/// column kernel and a row kernel, sampling with half-sample reflection.
Grid dense_separable(const Grid& img, const std::vector<double>& row_taps, const std::vector<double>& col_taps);

}  // namespace frd::oracle
