/**
 * @file ood.hpp
 * @brief Out-of-distribution scoring against a reference feature set.
 *
 * Scores are Euclidean distances from the reference mean in the reference's
 * z-normalised feature space. Reference scores are leave-one-out: each row
 * is scored against the mean of the other rows, using the normalisation of
 * the full reference set.
 */
#pragma once

#include "frd/feature_matrix.hpp"
#include "frd/metrics.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace frd {

inline constexpr double kDefaultPercentile = 95.0;

struct OODScoreSet {
    std::vector<std::string> ids;
    std::vector<double> scores;
    std::string reference_name;
};

struct OODReport {
    double threshold = 0.0;
    std::vector<std::string> ids;
    std::vector<double> scores;
    std::vector<bool> labels;  // true = OOD
    std::optional<double> auc;
    std::optional<double> nfrd_group;
    std::size_t n_id_ref = 0;
    std::size_t n_test = 0;
    double percentile = kDefaultPercentile;

    std::size_t ood_count() const;
    std::string to_json() const;
};

/// ||z(x) - z(mean(ref))||_2. DimError on width mismatch.
double ood_score(const Eigen::VectorXd& x, const Eigen::VectorXd& ref_mean,
                 const NormalizationStats& stats);
double ood_score(const Eigen::VectorXd& x, const FeatureMatrix& ref, const NormalizationStats& stats);

/// Scores of every test row against the full reference mean.
OODScoreSet score_rows(const FeatureMatrix& test, const FeatureMatrix& ref,
                       const NormalizationStats& stats);

/// Leave-one-out reference scores. SampleSizeError below 3 rows.
OODScoreSet loo_reference_scores(const FeatureMatrix& ref, const NormalizationStats& stats);

/// Linear-interpolation percentile of the scores. EmptyInput when empty;
/// ParamError outside [0, 100].
double select_threshold(std::span<const double> scores, double percentile = kDefaultPercentile);

/// Mann-Whitney estimate of P(pos > neg) with ties counted 1/2.
double auc(std::span<const double> pos, std::span<const double> neg);

struct DetectOptions {
    double percentile = kDefaultPercentile;
    bool with_auc = true;
};

OODReport detect(const FeatureMatrix& test, const FeatureMatrix& ref, const DetectOptions& options = {});

/// 2 * (AUC[test scores, LOO reference scores] - 0.5), signed.
double nfrd_group(const FeatureMatrix& test, const FeatureMatrix& ref);

struct ReferenceClassification {
    int label = 0;          // 1 when score_a >= score_b
    double score_a = 0.0;   // distance to reference a (healthy)
    double score_b = 0.0;   // distance to reference b (abnormal)
};

/// Precomputed per-reference state so batches do not refit statistics.
class ReferenceClassifier {
public:
    ReferenceClassifier(const FeatureMatrix& ref_a, const FeatureMatrix& ref_b);
    ReferenceClassification classify(const Eigen::VectorXd& x) const;

private:
    NormalizationStats stats_a_;
    NormalizationStats stats_b_;
    Eigen::VectorXd mean_a_;
    Eigen::VectorXd mean_b_;
};

ReferenceClassification classify_by_reference(const Eigen::VectorXd& x, const FeatureMatrix& ref_a,
                                              const FeatureMatrix& ref_b);

}  // namespace frd
