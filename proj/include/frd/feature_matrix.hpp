/**
 * @file feature_matrix.hpp
 * @brief Per-image feature rows and their CSV interchange format.
 */
#pragma once

#include "frd/catalog.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace frd {

struct FeatureMatrix {
    std::vector<std::string> ids;
    FeatureCatalog catalog;
    Eigen::MatrixXd values;  // rows() == ids.size(), cols() == catalog.size()

    std::size_t rows() const noexcept { return ids.size(); }
    std::size_t cols() const noexcept { return catalog.size(); }

    /// Rows in `row_indices` order.
    FeatureMatrix select_rows(const std::vector<std::size_t>& row_indices) const;
    /// Columns of `sub`, which must be contained in this catalog.
    FeatureMatrix select_columns(const FeatureCatalog& sub) const;
};

/// DimError when ids, catalog and values disagree in shape.
void check_shape(const FeatureMatrix& m);
/// CatalogError when the two matrices use different columns.
void require_same_catalog(const FeatureMatrix& a, const FeatureMatrix& b);

/// Header "id,<keys...>", one row per image, %.17g values.
void write_features_csv(const FeatureMatrix& m, std::ostream& out);
void write_features_csv(const FeatureMatrix& m, const std::filesystem::path& path);
FeatureMatrix read_features_csv(std::istream& in, const std::string& source = "<stream>");
FeatureMatrix read_features_csv(const std::filesystem::path& path);

/// Formats with 17 significant digits (round-trips exactly).
std::string format_double(double v);

}  // namespace frd
