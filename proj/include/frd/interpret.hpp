/**
 * @file interpret.hpp
 * @brief Which features moved between two sets, and which images changed most.
 */
#pragma once

#include "frd/feature_matrix.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace frd {

enum class NormalizeRef { A, Joint };

struct RankedFeature {
    std::size_t column = 0;
    CatalogEntry entry;
    double abs_delta = 0.0;
};

struct DeltaReport {
    Eigen::VectorXd delta;        // mean(b) - mean(a), normalised features
    Eigen::VectorXd abs_delta;
    std::vector<RankedFeature> ranked;               // |delta| descending, ties by column
    std::vector<std::pair<std::size_t, double>> coverage_curve;  // (k, covered fraction)
    std::size_t k50 = 0;          // smallest k with coverage >= 0.5; 0 when delta == 0

    std::string to_json(std::size_t top_k) const;
};

DeltaReport delta_report(const FeatureMatrix& a, const FeatureMatrix& b, NormalizeRef ref = NormalizeRef::A);

struct ImageChange {
    std::string id;
    double norm = 0.0;
};

/// Per-id ||z(b_i) - z(a_i)||_2, descending, ties by id. PairingError when
/// the id sets differ.
std::vector<ImageChange> rank_image_changes(const FeatureMatrix& a, const FeatureMatrix& b,
                                            NormalizeRef ref = NormalizeRef::A);

std::string image_changes_json(const std::vector<ImageChange>& changes, std::size_t top_k);

}  // namespace frd
