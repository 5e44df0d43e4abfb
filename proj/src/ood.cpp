#include "frd/ood.hpp"

#include "frd/error.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>

namespace frd {

namespace {

Eigen::VectorXd row_vector(const FeatureMatrix& m, std::size_t r) {
    return m.values.row(static_cast<Eigen::Index>(r)).transpose();
}

}  // namespace

std::size_t OODReport::ood_count() const { return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), true)); }

std::string OODReport::to_json() const {
    nlohmann::ordered_json j;
    j["threshold"] = threshold;
    j["percentile"] = percentile;
    j["labels"] = labels;
    j["ids"] = ids;
    j["scores"] = scores;
    j["auc"] = auc ? nlohmann::ordered_json(*auc) : nlohmann::ordered_json(nullptr);
    j["nfrd_group"] = nfrd_group ? nlohmann::ordered_json(*nfrd_group) : nlohmann::ordered_json(nullptr);
    j["counts"] = {{"n_id_ref", n_id_ref}, {"n_test", n_test}};
    j["n_ood"] = ood_count();
    return j.dump(2);
}

double ood_score(const Eigen::VectorXd& x, const Eigen::VectorXd& ref_mean, const NormalizationStats& stats) {
    if (static_cast<std::size_t>(x.size()) != stats.dim() || static_cast<std::size_t>(ref_mean.size()) != stats.dim()) {
        throw Error(ErrorKind::DimError, "feature vector has " + std::to_string(x.size()) + " entries, reference " +
                                             std::to_string(stats.dim()));
    }
    return ((x - ref_mean).array() / stats.stddev.array()).matrix().norm();
}

double ood_score(const Eigen::VectorXd& x, const FeatureMatrix& ref, const NormalizationStats& stats) {
    check_shape(ref);
    return ood_score(x, Eigen::VectorXd(ref.values.colwise().mean().transpose()), stats);
}

OODScoreSet score_rows(const FeatureMatrix& test, const FeatureMatrix& ref, const NormalizationStats& stats) {
    require_same_catalog(test, ref);
    const Eigen::VectorXd mean = ref.values.colwise().mean().transpose();
    OODScoreSet out;
    out.reference_name = "reference";
    out.ids = test.ids;
    out.scores.reserve(test.rows());
    for (std::size_t r = 0; r < test.rows(); ++r) out.scores.push_back(ood_score(row_vector(test, r), mean, stats));
    return out;
}

OODScoreSet loo_reference_scores(const FeatureMatrix& ref, const NormalizationStats& stats) {
    check_shape(ref);
    if (ref.rows() < 3) {
        throw Error(ErrorKind::SampleSizeError,
                    "leave-one-out scores need at least 3 reference rows, got " + std::to_string(ref.rows()));
    }
    const double n = static_cast<double>(ref.rows());
    const Eigen::VectorXd total = ref.values.colwise().sum().transpose();
    OODScoreSet out;
    out.reference_name = "reference (leave-one-out)";
    out.ids = ref.ids;
    out.scores.reserve(ref.rows());
    for (std::size_t r = 0; r < ref.rows(); ++r) {
        const Eigen::VectorXd x = row_vector(ref, r);
        const Eigen::VectorXd loo_mean = (total - x) / (n - 1.0);
        out.scores.push_back(ood_score(x, loo_mean, stats));
    }
    return out;
}

double select_threshold(std::span<const double> scores, double percentile) {
    if (scores.empty()) throw Error(ErrorKind::EmptyInput, "no scores to threshold");
    if (!(percentile >= 0.0 && percentile <= 100.0)) throw Error(ErrorKind::ParamError, "percentile must be in [0, 100]");
    std::vector<double> sorted(scores.begin(), scores.end());
    std::sort(sorted.begin(), sorted.end());
    const double rank = percentile / 100.0 * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(rank));
    if (lo + 1 >= sorted.size()) return sorted[lo];
    return sorted[lo] + (rank - static_cast<double>(lo)) * (sorted[lo + 1] - sorted[lo]);
}

double auc(std::span<const double> pos, std::span<const double> neg) {
    if (pos.empty() || neg.empty()) throw Error(ErrorKind::EmptyInput, "AUC needs positive and negative scores");
    // Rank-based count: for each positive, negatives strictly below plus half the ties.
    std::vector<double> sorted(neg.begin(), neg.end());
    std::sort(sorted.begin(), sorted.end());
    double wins = 0.0;
    for (double p : pos) {
        const auto lower = std::lower_bound(sorted.begin(), sorted.end(), p);
        const auto upper = std::upper_bound(lower, sorted.end(), p);
        wins += static_cast<double>(lower - sorted.begin()) + 0.5 * static_cast<double>(upper - lower);
    }
    return wins / (static_cast<double>(pos.size()) * static_cast<double>(neg.size()));
}

OODReport detect(const FeatureMatrix& test, const FeatureMatrix& ref, const DetectOptions& options) {
    require_same_catalog(test, ref);
    if (test.rows() == 0) throw Error(ErrorKind::EmptyInput, "test set is empty");
    const NormalizationStats stats = fit_normalization(ref.values);
    const OODScoreSet reference = loo_reference_scores(ref, stats);
    const OODScoreSet scored = score_rows(test, ref, stats);

    OODReport report;
    report.percentile = options.percentile;
    report.threshold = select_threshold(reference.scores, options.percentile);
    report.ids = scored.ids;
    report.scores = scored.scores;
    report.labels.reserve(scored.scores.size());
    for (double s : scored.scores) report.labels.push_back(s >= report.threshold);
    report.n_id_ref = ref.rows();
    report.n_test = test.rows();
    if (options.with_auc) {
        report.auc = auc(scored.scores, reference.scores);
        report.nfrd_group = 2.0 * (*report.auc - 0.5);
    }
    return report;
}

double nfrd_group(const FeatureMatrix& test, const FeatureMatrix& ref) {
    require_same_catalog(test, ref);
    if (test.rows() == 0) throw Error(ErrorKind::EmptyInput, "test set is empty");
    const NormalizationStats stats = fit_normalization(ref.values);
    const OODScoreSet reference = loo_reference_scores(ref, stats);
    const OODScoreSet scored = score_rows(test, ref, stats);
    return 2.0 * (auc(scored.scores, reference.scores) - 0.5);
}

ReferenceClassifier::ReferenceClassifier(const FeatureMatrix& ref_a, const FeatureMatrix& ref_b)
    : stats_a_(fit_normalization(ref_a)),
      stats_b_(fit_normalization(ref_b)),
      mean_a_(ref_a.values.colwise().mean().transpose()),
      mean_b_(ref_b.values.colwise().mean().transpose()) {
    require_same_catalog(ref_a, ref_b);
}

ReferenceClassification ReferenceClassifier::classify(const Eigen::VectorXd& x) const {
    ReferenceClassification c;
    c.score_a = ood_score(x, mean_a_, stats_a_);
    c.score_b = ood_score(x, mean_b_, stats_b_);
    c.label = c.score_a < c.score_b ? 0 : 1;
    return c;
}

ReferenceClassification classify_by_reference(const Eigen::VectorXd& x, const FeatureMatrix& ref_a,
                                              const FeatureMatrix& ref_b) {
    return ReferenceClassifier(ref_a, ref_b).classify(x);
}

}  // namespace frd
