/**
 * @file metrics.hpp
 * @brief Distribution distances between feature matrices.
 */
#pragma once

#include "frd/feature_matrix.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace frd {

inline constexpr double kDefaultLogEpsilon = 1e-12;
/// Relative eigenvalue clamp used by the matrix square roots.
inline constexpr double kEigenClampTol = 1e-10;
/// Upper end of the range FRD_v0 rescales min-max normalised features to.
inline constexpr double kV0Scale = 7.456;

struct GaussianSummary {
    Eigen::VectorXd mean;
    Eigen::MatrixXd covariance;
    std::size_t sample_count = 0;

    std::size_t dim() const noexcept { return static_cast<std::size_t>(mean.size()); }
};

/// Sample mean and unbiased (N-1) covariance; SampleSizeError below 2 rows.
GaussianSummary fit_gaussian(const Eigen::MatrixXd& rows);

struct NormalizationStats {
    Eigen::VectorXd mean;
    Eigen::VectorXd stddev;        // population; 1 where constant
    std::vector<bool> constant;    // column had zero spread

    std::size_t dim() const noexcept { return static_cast<std::size_t>(mean.size()); }
    /// (x - mean) / stddev, column-wise. DimError on width mismatch.
    Eigen::MatrixXd apply(const Eigen::MatrixXd& rows) const;
    Eigen::VectorXd apply(const Eigen::VectorXd& row) const;
};

NormalizationStats fit_normalization(const Eigen::MatrixXd& ref);
NormalizationStats fit_normalization(const FeatureMatrix& ref);

struct FrechetTerms {
    double mean_term = 0.0;        // ||mu1 - mu2||^2
    double trace_term = 0.0;       // tr[S1 + S2 - 2 (S1 S2)^1/2], clamped at 0
    double sqrt_trace = 0.0;       // tr[(S1 S2)^1/2]
    double clamped_eigen_mass = 0.0;  // sum of eigenvalues zeroed by the clamp
    double lambda_max = 0.0;       // largest eigenvalue of S1^1/2 S2 S1^1/2
    double distance = 0.0;
};

/// Fréchet (2-Wasserstein) distance between two Gaussians, with the
/// square-root trace taken from the eigenvalues of the symmetric product
/// S1^1/2 S2 S1^1/2. Eigenvalues below tol * lambda_max are treated as 0.
/// A trace term below the round-off floor 1e-12 * (tr S1 + tr S2) is reported
/// as 0. DimError on mismatched dimensions, NumericError on non-finite input.
FrechetTerms frechet_terms(const GaussianSummary& a, const GaussianSummary& b,
                           double tol = kEigenClampTol);
double frechet_distance(const GaussianSummary& a, const GaussianSummary& b,
                        double tol = kEigenClampTol);

/// Symmetric PSD square root; eigenvalues below tol * lambda_max clamp to 0.
Eigen::MatrixXd sqrtm_psd(const Eigen::MatrixXd& sym, double tol = kEigenClampTol);

enum class MetricKind { FRD, FRDv0, Frechet, MMD };
std::string_view metric_name(MetricKind k);
std::optional<MetricKind> parse_metric(std::string_view name);

struct DistanceResult {
    double value = 0.0;
    MetricKind metric = MetricKind::FRD;
    std::size_t m_used = 0;
    std::size_t n_ref = 0;
    std::size_t n_test = 0;
    bool epsilon_clamped = false;
    std::vector<std::string> warnings;

    /// Compact JSON object with the fields above.
    std::string to_json() const;
};

/// ln(max(d_F, epsilon)) between ref and test after z-normalising both with
/// the ref statistics.
DistanceResult frd(const FeatureMatrix& ref, const FeatureMatrix& test,
                   double epsilon = kDefaultLogEpsilon);

/// Raw Fréchet distance between the Gaussian fits, no normalisation or log.
DistanceResult frechet(const FeatureMatrix& ref, const FeatureMatrix& test);

/// Legacy variant: each matrix min-max normalised with its own per-column
/// range, scaled to [0, kV0Scale], then the raw Fréchet distance. Warns when
/// the catalog reaches beyond the Original variant.
DistanceResult frd_v0(const FeatureMatrix& ref, const FeatureMatrix& test);

/// Min-max normalisation of each column to [0, scale]; constant columns map to 0.
Eigen::MatrixXd minmax_scale(const Eigen::MatrixXd& rows, double scale = kV0Scale);

/// Median of the pairwise Euclidean distances over the pooled rows.
double median_pairwise_distance(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y);

/// Unbiased MMD^2 with k(a,b) = exp(-||a-b||^2 / (2 bandwidth^2)).
double mmd2_unbiased(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, double bandwidth);

/// sqrt(max(MMD^2, 0)) on ref-z-normalised features. Without a bandwidth the
/// median heuristic is used.
DistanceResult mmd(const FeatureMatrix& ref, const FeatureMatrix& test,
                   std::optional<double> bandwidth = std::nullopt);

}  // namespace frd
