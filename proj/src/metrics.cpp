#include "frd/metrics.hpp"

#include "frd/error.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace frd {

namespace {

void require_rows(const Eigen::MatrixXd& m, Eigen::Index n, const char* what) {
    if (m.rows() < n) {
        throw Error(ErrorKind::SampleSizeError, std::string(what) + " has " + std::to_string(m.rows()) +
                                                    " rows, need at least " + std::to_string(n));
    }
}

void require_finite(const Eigen::MatrixXd& m, const char* what) {
    if (!m.allFinite()) throw Error(ErrorKind::NumericError, std::string(what) + " contains non-finite values");
}

DistanceResult base_result(MetricKind kind, const FeatureMatrix& ref, const FeatureMatrix& test) {
    DistanceResult r;
    r.metric = kind;
    r.m_used = ref.cols();
    r.n_ref = ref.rows();
    r.n_test = test.rows();
    return r;
}

void check_pair(const FeatureMatrix& ref, const FeatureMatrix& test) {
    require_same_catalog(ref, test);
    require_rows(ref.values, 2, "reference set");
    require_rows(test.values, 2, "test set");
    require_finite(ref.values, "reference set");
    require_finite(test.values, "test set");
}

}  // namespace

GaussianSummary fit_gaussian(const Eigen::MatrixXd& rows) {
    require_rows(rows, 2, "sample");
    GaussianSummary g;
    g.sample_count = static_cast<std::size_t>(rows.rows());
    g.mean = rows.colwise().mean().transpose();
    const Eigen::MatrixXd centred = rows.rowwise() - g.mean.transpose();
    g.covariance = (centred.transpose() * centred) / static_cast<double>(rows.rows() - 1);
    return g;
}

NormalizationStats fit_normalization(const Eigen::MatrixXd& ref) {
    require_rows(ref, 2, "reference set");
    require_finite(ref, "reference set");
    NormalizationStats s;
    const auto m = ref.cols();
    s.mean = ref.colwise().mean().transpose();
    s.stddev.resize(m);
    s.constant.assign(static_cast<std::size_t>(m), false);
    for (Eigen::Index j = 0; j < m; ++j) {
        const double var = (ref.col(j).array() - s.mean(j)).square().mean();
        const double sd = std::sqrt(var);
        if (sd > 0.0) {
            s.stddev(j) = sd;
        } else {
            s.stddev(j) = 1.0;
            s.constant[static_cast<std::size_t>(j)] = true;
        }
    }
    return s;
}

NormalizationStats fit_normalization(const FeatureMatrix& ref) {
    check_shape(ref);
    return fit_normalization(ref.values);
}

Eigen::MatrixXd NormalizationStats::apply(const Eigen::MatrixXd& rows) const {
    if (static_cast<std::size_t>(rows.cols()) != dim()) {
        throw Error(ErrorKind::DimError, "normalisation fitted on " + std::to_string(dim()) + " features, got " +
                                             std::to_string(rows.cols()));
    }
    return (rows.rowwise() - mean.transpose()).array().rowwise() / stddev.transpose().array();
}

Eigen::VectorXd NormalizationStats::apply(const Eigen::VectorXd& row) const {
    if (static_cast<std::size_t>(row.size()) != dim()) {
        throw Error(ErrorKind::DimError, "normalisation fitted on " + std::to_string(dim()) + " features, got " +
                                             std::to_string(row.size()));
    }
    return (row - mean).array() / stddev.array();
}

Eigen::MatrixXd sqrtm_psd(const Eigen::MatrixXd& sym, double tol) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sym);
    if (eig.info() != Eigen::Success) throw Error(ErrorKind::NumericError, "eigendecomposition failed");
    Eigen::VectorXd ev = eig.eigenvalues();
    const double lambda_max = ev.size() > 0 ? std::max(ev.maxCoeff(), 0.0) : 0.0;
    for (Eigen::Index i = 0; i < ev.size(); ++i) ev(i) = ev(i) < tol * lambda_max ? 0.0 : std::sqrt(ev(i));
    return eig.eigenvectors() * ev.asDiagonal() * eig.eigenvectors().transpose();
}

FrechetTerms frechet_terms(const GaussianSummary& a, const GaussianSummary& b, double tol) {
    if (a.dim() != b.dim() || static_cast<std::size_t>(a.covariance.rows()) != a.dim() ||
        static_cast<std::size_t>(b.covariance.rows()) != b.dim() || a.covariance.cols() != a.covariance.rows() ||
        b.covariance.cols() != b.covariance.rows()) {
        throw Error(ErrorKind::DimError, "Gaussian summaries have dimensions " + std::to_string(a.dim()) + " and " +
                                             std::to_string(b.dim()));
    }
    if (!a.mean.allFinite() || !b.mean.allFinite() || !a.covariance.allFinite() || !b.covariance.allFinite()) {
        throw Error(ErrorKind::NumericError, "Gaussian summary contains non-finite values");
    }

    FrechetTerms t;
    t.mean_term = (a.mean - b.mean).squaredNorm();
    if (a.dim() == 0) return t;

    const Eigen::MatrixXd s1 = 0.5 * (a.covariance + a.covariance.transpose());
    const Eigen::MatrixXd s2 = 0.5 * (b.covariance + b.covariance.transpose());
    const Eigen::MatrixXd root1 = sqrtm_psd(s1, tol);
    Eigen::MatrixXd product = root1 * s2 * root1;
    product = 0.5 * (product + product.transpose());

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(product, Eigen::EigenvaluesOnly);
    if (eig.info() != Eigen::Success) throw Error(ErrorKind::NumericError, "eigendecomposition failed");
    const Eigen::VectorXd& ev = eig.eigenvalues();
    t.lambda_max = std::max(ev.maxCoeff(), 0.0);
    for (Eigen::Index i = 0; i < ev.size(); ++i) {
        if (ev(i) < tol * t.lambda_max) {
            t.clamped_eigen_mass += std::max(ev(i), 0.0);
        } else {
            t.sqrt_trace += std::sqrt(ev(i));
        }
    }

    const double traces = s1.trace() + s2.trace();
    const double trace_term = traces - 2.0 * t.sqrt_trace;
    // Below this the trace term is indistinguishable from eigensolver round-off.
    const double floor = 1e-12 * traces;
    t.trace_term = trace_term > floor ? trace_term : 0.0;
    t.distance = std::sqrt(t.mean_term + t.trace_term);
    return t;
}

double frechet_distance(const GaussianSummary& a, const GaussianSummary& b, double tol) {
    return frechet_terms(a, b, tol).distance;
}

std::string_view metric_name(MetricKind k) {
    switch (k) {
        case MetricKind::FRD: return "frd";
        case MetricKind::FRDv0: return "frd-v0";
        case MetricKind::Frechet: return "frechet";
        case MetricKind::MMD: return "mmd";
    }
    return "?";
}

std::optional<MetricKind> parse_metric(std::string_view name) {
    for (MetricKind k : {MetricKind::FRD, MetricKind::FRDv0, MetricKind::Frechet, MetricKind::MMD}) {
        if (metric_name(k) == name) return k;
    }
    return std::nullopt;
}

std::string DistanceResult::to_json() const {
    nlohmann::ordered_json j;
    j["metric"] = metric_name(metric);
    j["value"] = value;
    j["m_used"] = m_used;
    j["n_ref"] = n_ref;
    j["n_test"] = n_test;
    j["epsilon_clamped"] = epsilon_clamped;
    j["warnings"] = warnings;
    return j.dump();
}

DistanceResult frd(const FeatureMatrix& ref, const FeatureMatrix& test, double epsilon) {
    check_pair(ref, test);
    if (!(epsilon > 0.0)) throw Error(ErrorKind::ParamError, "epsilon must be positive");
    const NormalizationStats stats = fit_normalization(ref.values);
    const double d = frechet_distance(fit_gaussian(stats.apply(ref.values)), fit_gaussian(stats.apply(test.values)));
    DistanceResult r = base_result(MetricKind::FRD, ref, test);
    r.epsilon_clamped = d < epsilon;
    r.value = std::log(std::max(d, epsilon));
    return r;
}

DistanceResult frechet(const FeatureMatrix& ref, const FeatureMatrix& test) {
    check_pair(ref, test);
    DistanceResult r = base_result(MetricKind::Frechet, ref, test);
    r.value = frechet_distance(fit_gaussian(ref.values), fit_gaussian(test.values));
    return r;
}

Eigen::MatrixXd minmax_scale(const Eigen::MatrixXd& rows, double scale) {
    Eigen::MatrixXd out(rows.rows(), rows.cols());
    for (Eigen::Index j = 0; j < rows.cols(); ++j) {
        const double lo = rows.col(j).minCoeff();
        const double range = rows.col(j).maxCoeff() - lo;
        if (range > 0.0) {
            out.col(j) = (rows.col(j).array() - lo) / range * scale;
        } else {
            out.col(j).setZero();
        }
    }
    return out;
}

DistanceResult frd_v0(const FeatureMatrix& ref, const FeatureMatrix& test) {
    check_pair(ref, test);
    DistanceResult r = base_result(MetricKind::FRDv0, ref, test);
    if (!ref.catalog.original_only()) {
        r.warnings.push_back("frd-v0 is defined on Original-variant features; catalog includes wavelet variants");
    }
    r.value = frechet_distance(fit_gaussian(minmax_scale(ref.values)), fit_gaussian(minmax_scale(test.values)));
    return r;
}

double median_pairwise_distance(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y) {
    Eigen::MatrixXd pooled(x.rows() + y.rows(), x.cols());
    pooled << x, y;
    std::vector<double> d;
    d.reserve(static_cast<std::size_t>(pooled.rows() * (pooled.rows() - 1) / 2));
    for (Eigen::Index i = 0; i < pooled.rows(); ++i) {
        for (Eigen::Index j = i + 1; j < pooled.rows(); ++j) d.push_back((pooled.row(i) - pooled.row(j)).norm());
    }
    if (d.empty()) return 0.0;
    const std::size_t mid = d.size() / 2;
    std::nth_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(mid), d.end());
    if (d.size() % 2 == 1) return d[mid];
    const double upper = d[mid];
    const double lower = *std::max_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lower + upper);
}

double mmd2_unbiased(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, double bandwidth) {
    require_rows(x, 2, "reference set");
    require_rows(y, 2, "test set");
    if (x.cols() != y.cols()) throw Error(ErrorKind::DimError, "MMD inputs differ in width");
    if (!(bandwidth > 0.0) || !std::isfinite(bandwidth)) {
        throw Error(ErrorKind::ParamError, "MMD bandwidth must be positive and finite");
    }
    const double gamma = 1.0 / (2.0 * bandwidth * bandwidth);
    auto kernel_sum = [gamma](const Eigen::MatrixXd& a, const Eigen::MatrixXd& b, bool skip_diagonal) {
        double sum = 0.0;
        for (Eigen::Index i = 0; i < a.rows(); ++i) {
            for (Eigen::Index j = 0; j < b.rows(); ++j) {
                if (skip_diagonal && i == j) continue;
                sum += std::exp(-gamma * (a.row(i) - b.row(j)).squaredNorm());
            }
        }
        return sum;
    };
    const auto n = static_cast<double>(x.rows());
    const auto m = static_cast<double>(y.rows());
    return kernel_sum(x, x, true) / (n * (n - 1.0)) + kernel_sum(y, y, true) / (m * (m - 1.0)) -
           2.0 * kernel_sum(x, y, false) / (n * m);
}

DistanceResult mmd(const FeatureMatrix& ref, const FeatureMatrix& test, std::optional<double> bandwidth) {
    check_pair(ref, test);
    const NormalizationStats stats = fit_normalization(ref.values);
    const Eigen::MatrixXd x = stats.apply(ref.values);
    const Eigen::MatrixXd y = stats.apply(test.values);
    DistanceResult r = base_result(MetricKind::MMD, ref, test);
    double h = bandwidth ? *bandwidth : median_pairwise_distance(x, y);
    if (!bandwidth && !(h > 0.0)) {
        h = 1.0;
        r.warnings.push_back("median pairwise distance is zero; bandwidth set to 1");
    }
    r.value = std::sqrt(std::max(mmd2_unbiased(x, y, h), 0.0));
    return r;
}

}  // namespace frd
