#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "frd/error.hpp"
#include "frd/metrics.hpp"
#include "support.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

using namespace frd;
using frd::test::Rng;

namespace {

ErrorKind kind_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no frd::Error thrown");
    return ErrorKind::InternalError;
}

GaussianSummary summary(Eigen::VectorXd mean, Eigen::MatrixXd cov) {
    GaussianSummary s;
    s.mean = std::move(mean);
    s.covariance = std::move(cov);
    s.sample_count = 100;
    return s;
}

Eigen::MatrixXd random_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index i = 0; i < m.size(); ++i) m.data()[i] = test::normal(rng);
    return m;
}

Eigen::MatrixXd random_spd(Rng& rng, Eigen::Index m) {
    const Eigen::MatrixXd a = random_matrix(rng, m, m);
    return a * a.transpose() + 0.1 * Eigen::MatrixXd::Identity(m, m);
}

// Fréchet distance through the eigenvalues of the non-symmetric product.
double frechet_oracle(const GaussianSummary& a, const GaussianSummary& b) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(a.covariance * b.covariance, false);
    double root_trace = 0.0;
    for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) root_trace += std::sqrt(std::max(es.eigenvalues()(i).real(), 0.0));
    const double d2 = (a.mean - b.mean).squaredNorm() + a.covariance.trace() + b.covariance.trace() - 2 * root_trace;
    return std::sqrt(std::max(d2, 0.0));
}

double rbf_oracle(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y, double h) {
    auto k = [h](const Eigen::VectorXd& a, const Eigen::VectorXd& b) { return std::exp(-(a - b).squaredNorm() / (2 * h * h)); };
    double xx = 0, yy = 0, xy = 0;
    const auto n = x.rows(), m = y.rows();
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            if (i != j) xx += k(x.row(i), x.row(j));
        }
        for (Eigen::Index j = 0; j < m; ++j) xy += k(x.row(i), y.row(j));
    }
    for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = 0; j < m; ++j) {
            if (i != j) yy += k(y.row(i), y.row(j));
        }
    }
    return xx / (n * (n - 1.0)) + yy / (m * (m - 1.0)) - 2 * xy / (n * m);
}

}  // namespace

TEST_CASE("normalization examples") {
    Eigen::MatrixXd two(2, 1);
    two << 0, 2;
    const auto s = fit_normalization(two);
    CHECK(s.mean(0) == 1.0);
    CHECK(s.stddev(0) == 1.0);
    CHECK(!s.constant[0]);

    Eigen::MatrixXd flat(3, 1);
    flat << 5, 5, 5;
    const auto f = fit_normalization(flat);
    CHECK(f.constant[0]);
    CHECK(f.stddev(0) == 1.0);
    CHECK(f.apply(flat).isZero());

    Rng rng(1);
    Eigen::MatrixXd r = random_matrix(rng, 100, 5);
    r.col(2) = r.col(2) * 40.0 + Eigen::VectorXd::Constant(100, 7.0);
    const Eigen::MatrixXd z = fit_normalization(r).apply(r);
    for (Eigen::Index j = 0; j < 5; ++j) {
        const double mean = z.col(j).mean();
        const double sd = std::sqrt((z.col(j).array() - mean).square().mean());
        CHECK(std::abs(mean) <= 1e-12);
        CHECK(std::abs(sd - 1.0) <= 1e-12);
    }
    CHECK(kind_of([] { fit_normalization(Eigen::MatrixXd::Zero(1, 3)); }) == ErrorKind::SampleSizeError);
}

TEST_CASE("Fréchet closed forms") {
    Eigen::VectorXd m0(1), m3(1);
    m0 << 0;
    m3 << 3;
    const auto one = Eigen::MatrixXd::Identity(1, 1);
    CHECK(std::abs(frechet_distance(summary(m0, one), summary(m3, one)) - 3.0) <= 1e-9);

    Eigen::MatrixXd s1 = Eigen::MatrixXd::Zero(2, 2), s2 = Eigen::MatrixXd::Zero(2, 2);
    s1.diagonal() << 1, 4;
    s2.diagonal() << 9, 1;
    const Eigen::VectorXd mu = Eigen::VectorXd::Zero(2);
    CHECK(std::abs(frechet_distance(summary(mu, s1), summary(mu, s2)) - std::sqrt(5.0)) <= 1e-9);
    CHECK(std::abs(frechet_distance(summary(mu, s1), summary(mu, s1))) <= 1e-9);
    CHECK(kind_of([&] { frechet_distance(summary(mu, s1), summary(m0, one)); }) == ErrorKind::DimError);
    Eigen::MatrixXd nan_cov = s1;
    nan_cov(0, 0) = std::nan("");
    CHECK(kind_of([&] { frechet_distance(summary(mu, nan_cov), summary(mu, s1)); }) == ErrorKind::NumericError);
}

TEST_CASE("Fréchet matches the non-symmetric eigenvalue oracle") {
    Rng rng(2);
    for (int rep = 0; rep < 50; ++rep) {
        const auto m = static_cast<Eigen::Index>(test::uniform_int(rng, 1, 8));
        const auto a = summary(random_matrix(rng, m, 1), random_spd(rng, m));
        const auto b = summary(random_matrix(rng, m, 1), random_spd(rng, m));
        const double want = frechet_oracle(a, b);
        CHECK(std::abs(frechet_distance(a, b) - want) <= 1e-7 * std::max(1.0, want));
        CHECK(frechet_distance(a, b) == doctest::Approx(frechet_distance(b, a)).epsilon(1e-9));
    }
}

TEST_CASE("eigenvalue clamp bounds on rank-deficient covariances") {
    Rng rng(3);
    for (int rep = 0; rep < 100; ++rep) {
        const auto m = static_cast<Eigen::Index>(test::uniform_int(rng, 4, 20));
        const auto n = static_cast<Eigen::Index>(test::uniform_int(rng, 2, static_cast<int>(m)));
        const auto a = fit_gaussian(random_matrix(rng, n, m));
        const auto b = fit_gaussian(random_matrix(rng, n, m) * 2.0);
        const FrechetTerms clamped = frechet_terms(a, b);
        const FrechetTerms raw = frechet_terms(a, b, 0.0);
        CHECK(clamped.clamped_eigen_mass <= static_cast<double>(m) * kEigenClampTol * clamped.lambda_max);
        // dropping eigenvalues below tol*lambda_max moves sum(sqrt) by at most m*sqrt(tol*lambda_max)
        const double bracket_shift = 2.0 * static_cast<double>(m) * std::sqrt(kEigenClampTol * clamped.lambda_max);
        CHECK(std::abs(clamped.trace_term - raw.trace_term) <= bracket_shift + 1e-9);
        CHECK(clamped.trace_term >= 0.0);
        CHECK(std::isfinite(clamped.distance));
    }
}

TEST_CASE("sqrtm_psd squares back") {
    Rng rng(4);
    for (int rep = 0; rep < 20; ++rep) {
        const Eigen::MatrixXd s = random_spd(rng, 6);
        const Eigen::MatrixXd r = sqrtm_psd(s);
        CHECK((r * r - s).norm() <= 1e-9 * s.norm());
        CHECK((r - r.transpose()).norm() <= 1e-12);
    }
}

TEST_CASE("FRD identity and log floor") {
    Rng rng(5);
    const auto ref = test::matrix_from(random_matrix(rng, 30, 6));
    const auto r = frd::frd(ref, ref);
    CHECK(r.epsilon_clamped);
    CHECK(r.value == std::log(kDefaultLogEpsilon));
    CHECK(r.m_used == 6);
    CHECK(r.n_ref == 30);
    CHECK(frd::frd(ref, ref, 1e-3).value == std::log(1e-3));
    CHECK(kind_of([&] { frd::frd(ref, ref, 0.0); }) == ErrorKind::ParamError);
}

TEST_CASE("FRD equals log of the Fréchet distance of z-scored data") {
    Rng rng(6);
    const Eigen::MatrixXd x = random_matrix(rng, 40, 4) * 3.0;
    const Eigen::MatrixXd y = random_matrix(rng, 50, 4) + Eigen::MatrixXd::Constant(50, 4, 1.5);
    const auto stats = fit_normalization(x);
    const double d = frechet_oracle(fit_gaussian(stats.apply(x)), fit_gaussian(stats.apply(y)));
    const auto r = frd::frd(test::matrix_from(x), test::matrix_from(y));
    CHECK(!r.epsilon_clamped);
    CHECK(std::abs(r.value - std::log(d)) <= 1e-9);
}

TEST_CASE("FRD is not symmetric when reference variances differ") {
    Rng rng(7);
    Eigen::MatrixXd x = random_matrix(rng, 60, 3);
    Eigen::MatrixXd y = random_matrix(rng, 60, 3) * 4.0;
    const auto a = test::matrix_from(x), b = test::matrix_from(y);
    CHECK(std::abs(frd::frd(a, b).value - frd::frd(b, a).value) > 0.1);
}

TEST_CASE("FRD is invariant to per-feature affine reparameterization") {
    Rng rng(8);
    for (int rep = 0; rep < 100; ++rep) {
        const auto m = static_cast<Eigen::Index>(test::uniform_int(rng, 1, 10));
        const auto n1 = static_cast<Eigen::Index>(test::uniform_int(rng, 3, 40));
        const auto n2 = static_cast<Eigen::Index>(test::uniform_int(rng, 3, 40));
        Eigen::MatrixXd x = random_matrix(rng, n1, m);
        Eigen::MatrixXd y = random_matrix(rng, n2, m) * test::uniform(rng, 0.5, 2.0);
        y.array() += test::uniform(rng, -1, 1);
        Eigen::MatrixXd xa = x, ya = y;
        for (Eigen::Index j = 0; j < m; ++j) {
            double a = test::uniform(rng, 0.01, 100.0);
            if (test::uniform(rng) < 0.3) a = -a;
            const double b = test::uniform(rng, -50, 50);
            xa.col(j) = (x.col(j).array() * a + b).matrix();
            ya.col(j) = (y.col(j).array() * a + b).matrix();
        }
        const double v1 = frd::frd(test::matrix_from(x), test::matrix_from(y)).value;
        const double v2 = frd::frd(test::matrix_from(xa), test::matrix_from(ya)).value;
        CAPTURE(rep);
        CHECK(std::abs(v1 - v2) <= 1e-6);
    }
}

TEST_CASE("FRD_v0 examples") {
    Rng rng(9);
    const auto a = test::matrix_from(random_matrix(rng, 20, 3));
    CHECK(std::abs(frd_v0(a, a).value) <= 1e-9);
    CHECK(frd_v0(a, a).warnings.empty());
    FeatureMatrix wide{{"p", "q"}, FeatureCatalog::full(), Eigen::MatrixXd::Zero(2, 465)};
    wide.values(1, 0) = 1.0;
    CHECK(frd_v0(wide, wide).warnings.size() == 1);
    Eigen::MatrixXd r(2, 1), t(2, 1);
    r << 0, 1;
    t << 0, 2;
    CHECK(frd_v0(test::matrix_from(r), test::matrix_from(t)).value == doctest::Approx(0.0));

    for (int rep = 0; rep < 20; ++rep) {
        const Eigen::MatrixXd x = random_matrix(rng, 15, 4), y = random_matrix(rng, 12, 4);
        Eigen::MatrixXd ya = y;
        for (Eigen::Index j = 0; j < 4; ++j) ya.col(j) = (y.col(j).array() * test::uniform(rng, 0.1, 9) + test::uniform(rng, -9, 9)).matrix();
        const double v1 = frd_v0(test::matrix_from(x), test::matrix_from(y)).value;
        const double v2 = frd_v0(test::matrix_from(x), test::matrix_from(ya)).value;
        CHECK(std::abs(v1 - v2) <= 1e-9);
    }
    const Eigen::MatrixXd scaled = minmax_scale(r);
    CHECK(scaled(1, 0) == kV0Scale);
}

TEST_CASE("MMD") {
    Eigen::MatrixXd x(3, 1), y(3, 1);
    x << 0, 0.1, 0.2;
    y << 5, 5.1, 5.3;
    const double hand = rbf_oracle(x, y, 1.0);
    CHECK(std::abs(mmd2_unbiased(x, y, 1.0) - hand) <= 1e-12);
    CHECK(std::abs(mmd2_unbiased(x, y, 1.0) - mmd2_unbiased(y, x, 1.0)) <= 1e-12);

    Rng rng(10);
    const Eigen::MatrixXd a = random_matrix(rng, 25, 3), b = random_matrix(rng, 30, 3);
    CHECK(std::abs(mmd2_unbiased(a, b, 0.7) - rbf_oracle(a, b, 0.7)) <= 1e-12);
    CHECK(mmd2_unbiased(a, a, 0.7) <= 1e-12);

    const auto ma = test::matrix_from(a);
    const auto same = mmd(ma, ma);
    CHECK(same.value == 0.0);
    CHECK(mmd(ma, ma, 2.0).value == 0.0);

    Eigen::MatrixXd c(4, 2);
    c << 0, 0, 3, 4, 0, 0, 3, 4;
    CHECK(median_pairwise_distance(c.topRows(2), c.bottomRows(2)) == doctest::Approx(5.0));
    const auto flat = test::matrix_from(Eigen::MatrixXd::Zero(3, 2));
    CHECK(!mmd(flat, flat).warnings.empty());
    CHECK(kind_of([&] { mmd2_unbiased(a, b, -1.0); }) == ErrorKind::ParamError);
}

TEST_CASE("metric argument validation") {
    const auto a = test::matrix_from(Eigen::MatrixXd::Zero(3, 2));
    const auto b = test::matrix_from(Eigen::MatrixXd::Zero(3, 3));
    CHECK(kind_of([&] { frd::frd(a, b); }) == ErrorKind::CatalogError);
    const auto tiny = test::matrix_from(Eigen::MatrixXd::Zero(1, 2));
    CHECK(kind_of([&] { frd::frd(tiny, a); }) == ErrorKind::SampleSizeError);
    CHECK(kind_of([&] { frechet(a, tiny); }) == ErrorKind::SampleSizeError);
    Eigen::MatrixXd v = Eigen::MatrixXd::Zero(3, 2);
    v(1, 1) = std::numeric_limits<double>::infinity();
    CHECK(kind_of([&] { frd::frd(test::matrix_from(v), a); }) == ErrorKind::NumericError);
    CHECK(parse_metric("frd-v0") == MetricKind::FRDv0);
    CHECK(!parse_metric("fid"));
}
