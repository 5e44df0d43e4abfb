#include "frd/interpret.hpp"

#include "frd/error.hpp"
#include "frd/metrics.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <map>
#include <numeric>

namespace frd {

namespace {

NormalizationStats reference_stats(const FeatureMatrix& a, const FeatureMatrix& b, NormalizeRef ref) {
    if (ref == NormalizeRef::A) return fit_normalization(a.values);
    Eigen::MatrixXd joint(a.values.rows() + b.values.rows(), a.values.cols());
    joint << a.values, b.values;
    return fit_normalization(joint);
}

}  // namespace

DeltaReport delta_report(const FeatureMatrix& a, const FeatureMatrix& b, NormalizeRef ref) {
    require_same_catalog(a, b);
    if (a.rows() < 2 || b.rows() < 2) throw Error(ErrorKind::SampleSizeError, "delta report needs at least 2 rows per set");
    const NormalizationStats stats = reference_stats(a, b, ref);

    DeltaReport report;
    report.delta = (stats.apply(b.values).colwise().mean() - stats.apply(a.values).colwise().mean()).transpose();
    report.abs_delta = report.delta.cwiseAbs();

    std::vector<std::size_t> order(a.cols());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        return report.abs_delta(static_cast<Eigen::Index>(x)) > report.abs_delta(static_cast<Eigen::Index>(y));
    });
    report.ranked.reserve(order.size());
    for (std::size_t c : order) report.ranked.push_back({c, a.catalog[c], report.abs_delta(static_cast<Eigen::Index>(c))});

    const double total = report.abs_delta.sum();
    if (total > 0.0) {
        double running = 0.0;
        report.coverage_curve.reserve(order.size());
        for (std::size_t k = 0; k < order.size(); ++k) {
            running += report.ranked[k].abs_delta;
            const double fraction = k + 1 == order.size() ? 1.0 : std::min(running / total, 1.0);
            report.coverage_curve.emplace_back(k + 1, fraction);
            if (report.k50 == 0 && fraction >= 0.5) report.k50 = k + 1;
        }
    }
    return report;
}

std::string DeltaReport::to_json(std::size_t top_k) const {
    nlohmann::ordered_json j;
    j["m"] = delta.size();
    j["k50"] = k50;
    j["total_abs_delta"] = abs_delta.sum();
    nlohmann::ordered_json top = nlohmann::ordered_json::array();
    for (std::size_t k = 0; k < std::min(top_k, ranked.size()); ++k) {
        const auto& r = ranked[k];
        top.push_back({{"rank", k + 1},
                       {"feature", r.entry.label()},
                       {"key", r.entry.key()},
                       {"delta", delta(static_cast<Eigen::Index>(r.column))},
                       {"abs_delta", r.abs_delta}});
    }
    j["ranked_features"] = top;
    nlohmann::ordered_json curve = nlohmann::ordered_json::array();
    for (const auto& [k, f] : coverage_curve) curve.push_back({k, f});
    j["coverage_curve"] = curve;
    return j.dump(2);
}

std::vector<ImageChange> rank_image_changes(const FeatureMatrix& a, const FeatureMatrix& b, NormalizeRef ref) {
    require_same_catalog(a, b);
    std::map<std::string, std::size_t> b_rows;
    for (std::size_t r = 0; r < b.rows(); ++r) b_rows.emplace(b.ids[r], r);
    if (b_rows.size() != b.rows() || a.rows() != b.rows()) {
        throw Error(ErrorKind::PairingError, "paired sets must contain the same unique ids");
    }
    std::vector<std::size_t> pairing(a.rows());
    for (std::size_t r = 0; r < a.rows(); ++r) {
        const auto it = b_rows.find(a.ids[r]);
        if (it == b_rows.end()) throw Error(ErrorKind::PairingError, "id '" + a.ids[r] + "' missing from second set");
        pairing[r] = it->second;
    }
    const NormalizationStats stats = reference_stats(a, b, ref);
    std::vector<ImageChange> out;
    out.reserve(a.rows());
    for (std::size_t r = 0; r < a.rows(); ++r) {
        const Eigen::VectorXd diff = b.values.row(static_cast<Eigen::Index>(pairing[r])).transpose() -
                                     a.values.row(static_cast<Eigen::Index>(r)).transpose();
        out.push_back({a.ids[r], (diff.array() / stats.stddev.array()).matrix().norm()});
    }
    std::sort(out.begin(), out.end(), [](const ImageChange& x, const ImageChange& y) {
        return x.norm != y.norm ? x.norm > y.norm : x.id < y.id;
    });
    return out;
}

std::string image_changes_json(const std::vector<ImageChange>& changes, std::size_t top_k) {
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (std::size_t k = 0; k < std::min(top_k, changes.size()); ++k) {
        j.push_back({{"rank", k + 1}, {"id", changes[k].id}, {"norm", changes[k].norm}});
    }
    return j.dump(2);
}

}  // namespace frd
