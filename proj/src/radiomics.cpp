/**
 * @file radiomics.cpp
 * @brief Texture matrices and the feature formulas evaluated on them.
 */
#include "frd/radiomics.hpp"

#include "frd/error.hpp"
#include "frd/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace frd {

namespace {

double safe_div(double num, double den) { return den != 0.0 ? num / den : 0.0; }

double entropy_term(double p) { return p > 0.0 ? -p * std::log2(p) : 0.0; }

// Linear-interpolation percentile on sorted data, interpolating from the
// nearer neighbour as numpy does.
double sorted_percentile(const std::vector<double>& sorted, double q) {
    const double rank = q / 100.0 * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(rank));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    const double t = rank - static_cast<double>(lo);
    const double diff = sorted[hi] - sorted[lo];
    return t < 0.5 ? sorted[lo] + diff * t : sorted[hi] - diff * (1.0 - t);
}

bool in_bounds(const DiscretizedImage& d, std::ptrdiff_t r, std::ptrdiff_t c) {
    return r >= 0 && c >= 0 && r < static_cast<std::ptrdiff_t>(d.height) && c < static_cast<std::ptrdiff_t>(d.width);
}

constexpr int kNeighbours8[8][2] = {{-1, -1}, {-1, 0}, {-1, 1}, {0, -1}, {0, 1}, {1, -1}, {1, 0}, {1, 1}};

// Emphasis and non-uniformity statistics shared by run-length, size-zone and
// dependence matrices: rows are gray levels i, columns are sizes j (1-based).
struct SizeMatrixStats {
    double total = 0.0;      // number of runs / zones / pixels
    double small = 0.0;      // sum P / j^2
    double large = 0.0;      // sum P j^2
    double gray_nu = 0.0;    // sum_i (sum_j P)^2
    double size_nu = 0.0;    // sum_j (sum_i P)^2
    double gray_var = 0.0;
    double size_var = 0.0;
    double entropy = 0.0;
    double low_gray = 0.0;   // sum P / i^2
    double high_gray = 0.0;  // sum P i^2
    double small_low = 0.0;
    double small_high = 0.0;
    double large_low = 0.0;
    double large_high = 0.0;
};

SizeMatrixStats size_matrix_stats(const Eigen::MatrixXd& m) {
    SizeMatrixStats s;
    s.total = m.sum();
    if (s.total <= 0.0) return s;
    const Eigen::VectorXd row_sums = m.rowwise().sum();
    const Eigen::RowVectorXd col_sums = m.colwise().sum();
    s.gray_nu = row_sums.squaredNorm();
    s.size_nu = col_sums.squaredNorm();

    double mu_i = 0.0, mu_j = 0.0;
    for (Eigen::Index a = 0; a < m.rows(); ++a) {
        for (Eigen::Index b = 0; b < m.cols(); ++b) {
            const double p = m(a, b) / s.total;
            mu_i += p * static_cast<double>(a + 1);
            mu_j += p * static_cast<double>(b + 1);
        }
    }
    for (Eigen::Index a = 0; a < m.rows(); ++a) {
        const double i = static_cast<double>(a + 1);
        const double i2 = i * i;
        for (Eigen::Index b = 0; b < m.cols(); ++b) {
            const double v = m(a, b);
            if (v == 0.0) continue;
            const double j = static_cast<double>(b + 1);
            const double j2 = j * j;
            const double p = v / s.total;
            s.small += v / j2;
            s.large += v * j2;
            s.gray_var += p * (i - mu_i) * (i - mu_i);
            s.size_var += p * (j - mu_j) * (j - mu_j);
            s.entropy += entropy_term(p);
            s.low_gray += v / i2;
            s.high_gray += v * i2;
            s.small_low += v / (i2 * j2);
            s.small_high += v * i2 / j2;
            s.large_low += v * j2 / i2;
            s.large_high += v * i2 * j2;
        }
    }
    return s;
}

// Features shared by GLRLM and GLSZM, `units` = number of pixels.
std::array<double, 16> run_zone_features(const Eigen::MatrixXd& m, double units) {
    const SizeMatrixStats s = size_matrix_stats(m);
    const double n = s.total;
    return {safe_div(s.small, n),      safe_div(s.large, n),      safe_div(s.gray_nu, n),
            safe_div(s.gray_nu, n * n), safe_div(s.size_nu, n),   safe_div(s.size_nu, n * n),
            safe_div(n, units),        s.gray_var,                s.size_var,
            s.entropy,                 safe_div(s.low_gray, n),   safe_div(s.high_gray, n),
            safe_div(s.small_low, n),  safe_div(s.small_high, n), safe_div(s.large_low, n),
            safe_div(s.large_high, n)};
}

template <std::size_t N>
void accumulate(std::array<double, N>& acc, const std::array<double, N>& v) {
    for (std::size_t k = 0; k < N; ++k) acc[k] += v[k];
}

template <std::size_t N>
void scale(std::array<double, N>& acc, double factor) {
    for (double& x : acc) x *= factor;
}

// Union-find over pixel indices, used to label 8-connected equal-level zones.
class DisjointSets {
public:
    explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }

    std::size_t find(std::size_t x) {
        while (parent_[x] != x) {
            parent_[x] = parent_[parent_[x]];
            x = parent_[x];
        }
        return x;
    }

    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return;
        if (b < a) std::swap(a, b);
        parent_[b] = a;
    }

private:
    std::vector<std::size_t> parent_;
};

}  // namespace

int DiscretizedImage::present_levels() const {
    std::vector<char> seen(static_cast<std::size_t>(bin_count) + 1, 0);
    for (int l : levels) seen[static_cast<std::size_t>(l)] = 1;
    return static_cast<int>(std::count(seen.begin(), seen.end(), 1));
}

DiscretizedImage discretize(const Grid& grid, int bin_count) {
    if (bin_count < 2) throw Error(ErrorKind::ParamError, "bin count must be at least 2");
    DiscretizedImage d;
    d.height = grid.height();
    d.width = grid.width();
    d.bin_count = bin_count;
    d.levels.assign(grid.size(), 1);
    const auto values = grid.values();
    if (values.empty()) return d;
    const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    const double lo = *lo_it;
    const double range = *hi_it - lo;
    if (!(range > 0.0)) return d;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double scaled = std::floor((values[i] - lo) / range * bin_count) + 1.0;
        d.levels[i] = static_cast<int>(std::min(scaled, static_cast<double>(bin_count)));
    }
    return d;
}

std::array<int, 2> direction_offset(Direction d) {
    switch (d) {
        case Direction::Deg0: return {0, 1};
        case Direction::Deg45: return {-1, 1};
        case Direction::Deg90: return {-1, 0};
        case Direction::Deg135: return {-1, -1};
    }
    return {0, 1};
}

// ---------------------------------------------------------------------------
// First order

FirstOrderFeatures first_order_features(const Grid& grid, int bin_count) {
    FirstOrderFeatures f{};
    const auto values = grid.values();
    if (values.empty()) return f;
    const double n = static_cast<double>(values.size());

    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());

    double sum = 0.0, energy = 0.0;
    for (double v : values) {
        sum += v;
        energy += v * v;
    }
    const double mean = sum / n;
    double m2 = 0.0, m3 = 0.0, m4 = 0.0, mad = 0.0;
    for (double v : values) {
        const double dv = v - mean;
        const double d2 = dv * dv;
        m2 += d2;
        m3 += d2 * dv;
        m4 += d2 * d2;
        mad += std::abs(dv);
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;

    const double p10 = sorted_percentile(sorted, 10.0);
    const double p90 = sorted_percentile(sorted, 90.0);
    double robust_sum = 0.0, robust_n = 0.0;
    for (double v : values) {
        if (v >= p10 && v <= p90) {
            robust_sum += v;
            robust_n += 1.0;
        }
    }
    const double robust_mean = safe_div(robust_sum, robust_n);
    double robust_mad = 0.0;
    for (double v : values) {
        if (v >= p10 && v <= p90) robust_mad += std::abs(v - robust_mean);
    }

    const DiscretizedImage d = discretize(grid, bin_count);
    std::vector<double> hist(static_cast<std::size_t>(bin_count) + 1, 0.0);
    for (int l : d.levels) hist[static_cast<std::size_t>(l)] += 1.0;
    double entropy = 0.0, uniformity = 0.0;
    for (double h : hist) {
        const double p = h / n;
        entropy += entropy_term(p);
        uniformity += p * p;
    }

    f[0] = energy;
    f[1] = energy;  // unit pixel area
    f[2] = entropy;
    f[3] = sorted.front();
    f[4] = p10;
    f[5] = p90;
    f[6] = sorted.back();
    f[7] = mean;
    f[8] = sorted_percentile(sorted, 50.0);
    f[9] = sorted_percentile(sorted, 75.0) - sorted_percentile(sorted, 25.0);
    f[10] = sorted.back() - sorted.front();
    f[11] = mad / n;
    f[12] = safe_div(robust_mad, robust_n);
    f[13] = std::sqrt(energy / n);
    f[14] = m2 > 0.0 ? m3 / std::pow(m2, 1.5) : 0.0;
    f[15] = m2 > 0.0 ? m4 / (m2 * m2) : 0.0;
    f[16] = m2;
    f[17] = uniformity;
    return f;
}

// ---------------------------------------------------------------------------
// GLCM

Eigen::MatrixXd glcm_matrix(const DiscretizedImage& d, Direction dir) {
    const auto [dr, dc] = direction_offset(dir);
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(d.bin_count, d.bin_count);
    const auto h = static_cast<std::ptrdiff_t>(d.height);
    const auto w = static_cast<std::ptrdiff_t>(d.width);
    for (std::ptrdiff_t r = 0; r < h; ++r) {
        const std::ptrdiff_t r2 = r + dr;
        if (r2 < 0 || r2 >= h) continue;
        for (std::ptrdiff_t c = 0; c < w; ++c) {
            const std::ptrdiff_t c2 = c + dc;
            if (c2 < 0 || c2 >= w) continue;
            const int a = d.levels[static_cast<std::size_t>(r * w + c)] - 1;
            const int b = d.levels[static_cast<std::size_t>(r2 * w + c2)] - 1;
            p(a, b) += 1.0;
            p(b, a) += 1.0;
        }
    }
    const double total = p.sum();
    if (total > 0.0) p /= total;
    return p;
}

namespace {

GlcmFeatures glcm_from_matrix(const Eigen::MatrixXd& p, int present_levels) {
    GlcmFeatures f{};
    const Eigen::Index ng = p.rows();
    const Eigen::VectorXd px = p.rowwise().sum();
    const Eigen::VectorXd py = p.colwise().sum().transpose();

    double mu_x = 0.0, mu_y = 0.0;
    for (Eigen::Index a = 0; a < ng; ++a) {
        mu_x += static_cast<double>(a + 1) * px(a);
        mu_y += static_cast<double>(a + 1) * py(a);
    }
    double var_x = 0.0, var_y = 0.0, hx = 0.0, hy = 0.0;
    for (Eigen::Index a = 0; a < ng; ++a) {
        const double i = static_cast<double>(a + 1);
        var_x += (i - mu_x) * (i - mu_x) * px(a);
        var_y += (i - mu_y) * (i - mu_y) * py(a);
        hx += entropy_term(px(a));
        hy += entropy_term(py(a));
    }

    std::vector<double> p_sum(static_cast<std::size_t>(2 * ng + 1), 0.0);  // index k = i + j
    std::vector<double> p_diff(static_cast<std::size_t>(ng), 0.0);         // index k = |i - j|
    const double ngp = static_cast<double>(present_levels);
    double autocorr = 0.0, prominence = 0.0, shade = 0.0, tendency = 0.0, contrast = 0.0;
    double joint_energy = 0.0, hxy = 0.0, hxy1 = 0.0, hxy2 = 0.0;
    double idm = 0.0, idmn = 0.0, id = 0.0, idn = 0.0, max_p = 0.0, sum_squares = 0.0;
    for (Eigen::Index a = 0; a < ng; ++a) {
        const double i = static_cast<double>(a + 1);
        for (Eigen::Index b = 0; b < ng; ++b) {
            const double j = static_cast<double>(b + 1);
            const double pxy = px(a) * py(b);
            if (pxy > 0.0) hxy2 -= pxy * std::log2(pxy);
            const double v = p(a, b);
            if (v == 0.0) continue;
            const double diff = i - j;
            const double adiff = std::abs(diff);
            const double centred = i + j - mu_x - mu_y;
            p_sum[static_cast<std::size_t>(a + b + 2)] += v;
            p_diff[static_cast<std::size_t>(std::abs(a - b))] += v;
            autocorr += v * i * j;
            prominence += v * centred * centred * centred * centred;
            shade += v * centred * centred * centred;
            tendency += v * centred * centred;
            contrast += v * diff * diff;
            joint_energy += v * v;
            hxy -= v * std::log2(v);
            hxy1 -= v * std::log2(pxy);
            idm += v / (1.0 + diff * diff);
            idmn += v / (1.0 + diff * diff / (ngp * ngp));
            id += v / (1.0 + adiff);
            idn += v / (1.0 + adiff / ngp);
            max_p = std::max(max_p, v);
            sum_squares += v * (i - mu_x) * (i - mu_x);
        }
    }

    double diff_avg = 0.0, diff_entropy = 0.0, inv_var = 0.0;
    for (std::size_t k = 0; k < p_diff.size(); ++k) {
        diff_avg += static_cast<double>(k) * p_diff[k];
        diff_entropy += entropy_term(p_diff[k]);
        if (k > 0) inv_var += p_diff[k] / static_cast<double>(k * k);
    }
    double diff_var = 0.0;
    for (std::size_t k = 0; k < p_diff.size(); ++k) {
        const double dk = static_cast<double>(k) - diff_avg;
        diff_var += dk * dk * p_diff[k];
    }
    double sum_avg = 0.0, sum_entropy = 0.0;
    for (std::size_t k = 0; k < p_sum.size(); ++k) {
        sum_avg += static_cast<double>(k) * p_sum[k];
        sum_entropy += entropy_term(p_sum[k]);
    }

    const double sigma = std::sqrt(var_x * var_y);
    const double correlation = sigma > 0.0 ? (autocorr - mu_x * mu_y) / sigma : 1.0;
    const double imc1 = safe_div(hxy - hxy1, std::max(hx, hy));
    const double imc2 = std::sqrt(1.0 - std::exp(-2.0 * std::max(hxy2 - hxy, 0.0)));

    // Maximal correlation coefficient: sqrt of the second largest eigenvalue
    // of Q(i,k) = sum_j P(i,j) P(k,j) / (px(i) py(j)), evaluated through the
    // similar symmetric matrix D^-1/2 P Dy^-1 P^T D^-1/2 on occupied levels.
    double mcc = 1.0;
    std::vector<Eigen::Index> rows_used, cols_used;
    for (Eigen::Index a = 0; a < ng; ++a) {
        if (px(a) > 0.0) rows_used.push_back(a);
        if (py(a) > 0.0) cols_used.push_back(a);
    }
    if (rows_used.size() >= 2) {
        const auto nr = static_cast<Eigen::Index>(rows_used.size());
        const auto nc = static_cast<Eigen::Index>(cols_used.size());
        Eigen::MatrixXd a(nr, nc);
        for (Eigen::Index r = 0; r < nr; ++r) {
            for (Eigen::Index c = 0; c < nc; ++c) {
                a(r, c) = p(rows_used[static_cast<std::size_t>(r)], cols_used[static_cast<std::size_t>(c)]) /
                          std::sqrt(px(rows_used[static_cast<std::size_t>(r)]) * py(cols_used[static_cast<std::size_t>(c)]));
            }
        }
        const Eigen::MatrixXd s = a * a.transpose();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(s, Eigen::EigenvaluesOnly);
        const Eigen::VectorXd& ev = eig.eigenvalues();  // ascending
        mcc = std::sqrt(std::max(ev(ev.size() - 2), 0.0));
    }

    f[0] = autocorr;
    f[1] = mu_x;
    f[2] = prominence;
    f[3] = shade;
    f[4] = tendency;
    f[5] = contrast;
    f[6] = correlation;
    f[7] = diff_avg;
    f[8] = diff_entropy;
    f[9] = diff_var;
    f[10] = joint_energy;
    f[11] = hxy;
    f[12] = imc1;
    f[13] = imc2;
    f[14] = idm;
    f[15] = mcc;
    f[16] = idmn;
    f[17] = id;
    f[18] = idn;
    f[19] = inv_var;
    f[20] = max_p;
    f[21] = sum_avg;
    f[22] = sum_entropy;
    f[23] = sum_squares;
    return f;
}

}  // namespace

GlcmFeatures glcm_features(const DiscretizedImage& d, Direction dir) {
    return glcm_from_matrix(glcm_matrix(d, dir), d.present_levels());
}

GlcmFeatures glcm_features(const DiscretizedImage& d) {
    const int present = d.present_levels();
    GlcmFeatures acc{};
    int used = 0;
    for (Direction dir : kAllDirections) {
        const Eigen::MatrixXd p = glcm_matrix(d, dir);
        if (p.sum() <= 0.0) continue;
        accumulate(acc, glcm_from_matrix(p, present));
        ++used;
    }
    if (used > 0) scale(acc, 1.0 / used);
    return acc;
}

// ---------------------------------------------------------------------------
// GLRLM

Eigen::MatrixXd glrlm_matrix(const DiscretizedImage& d, Direction dir) {
    const auto [dr, dc] = direction_offset(dir);
    const auto h = static_cast<std::ptrdiff_t>(d.height);
    const auto w = static_cast<std::ptrdiff_t>(d.width);
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d.bin_count, std::max<std::ptrdiff_t>(std::max(h, w), 1));

    // A line starts at every pixel whose predecessor lies outside the image.
    for (std::ptrdiff_t r0 = 0; r0 < h; ++r0) {
        for (std::ptrdiff_t c0 = 0; c0 < w; ++c0) {
            if (in_bounds(d, r0 - dr, c0 - dc)) continue;
            int current = -1;
            std::ptrdiff_t length = 0;
            for (std::ptrdiff_t r = r0, c = c0; in_bounds(d, r, c); r += dr, c += dc) {
                const int level = d.levels[static_cast<std::size_t>(r * w + c)];
                if (level == current) {
                    ++length;
                } else {
                    if (length > 0) m(current - 1, length - 1) += 1.0;
                    current = level;
                    length = 1;
                }
            }
            if (length > 0) m(current - 1, length - 1) += 1.0;
        }
    }
    return m;
}

GlrlmFeatures glrlm_features(const DiscretizedImage& d, Direction dir) {
    return run_zone_features(glrlm_matrix(d, dir), static_cast<double>(d.levels.size()));
}

GlrlmFeatures glrlm_features(const DiscretizedImage& d) {
    GlrlmFeatures acc{};
    for (Direction dir : kAllDirections) accumulate(acc, glrlm_features(d, dir));
    scale(acc, 1.0 / static_cast<double>(kAllDirections.size()));
    return acc;
}

// ---------------------------------------------------------------------------
// GLSZM

Eigen::MatrixXd glszm_matrix(const DiscretizedImage& d) {
    const std::size_t h = d.height;
    const std::size_t w = d.width;
    DisjointSets sets(d.levels.size());
    // Joining each pixel to its already-visited neighbours (W, NW, N, NE)
    // covers every 8-connected pair exactly once.
    for (std::size_t r = 0; r < h; ++r) {
        for (std::size_t c = 0; c < w; ++c) {
            const std::size_t idx = r * w + c;
            const int level = d.levels[idx];
            if (c > 0 && d.levels[idx - 1] == level) sets.unite(idx, idx - 1);
            if (r > 0) {
                const std::size_t up = idx - w;
                if (d.levels[up] == level) sets.unite(idx, up);
                if (c > 0 && d.levels[up - 1] == level) sets.unite(idx, up - 1);
                if (c + 1 < w && d.levels[up + 1] == level) sets.unite(idx, up + 1);
            }
        }
    }
    std::vector<std::size_t> zone_size(d.levels.size(), 0);
    std::size_t largest = 1;
    for (std::size_t i = 0; i < d.levels.size(); ++i) largest = std::max(largest, ++zone_size[sets.find(i)]);

    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d.bin_count, static_cast<Eigen::Index>(largest));
    for (std::size_t i = 0; i < d.levels.size(); ++i) {
        if (zone_size[i] > 0 && sets.find(i) == i) {
            m(d.levels[i] - 1, static_cast<Eigen::Index>(zone_size[i]) - 1) += 1.0;
        }
    }
    return m;
}

GlszmFeatures glszm_features(const DiscretizedImage& d) {
    return run_zone_features(glszm_matrix(d), static_cast<double>(d.levels.size()));
}

// ---------------------------------------------------------------------------
// GLDM

Eigen::MatrixXd gldm_matrix(const DiscretizedImage& d) {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(d.bin_count, 9);
    const auto h = static_cast<std::ptrdiff_t>(d.height);
    const auto w = static_cast<std::ptrdiff_t>(d.width);
    for (std::ptrdiff_t r = 0; r < h; ++r) {
        for (std::ptrdiff_t c = 0; c < w; ++c) {
            const int level = d.levels[static_cast<std::size_t>(r * w + c)];
            int dependence = 1;
            for (const auto& off : kNeighbours8) {
                const std::ptrdiff_t rr = r + off[0], cc = c + off[1];
                if (in_bounds(d, rr, cc) && d.levels[static_cast<std::size_t>(rr * w + cc)] == level) ++dependence;
            }
            m(level - 1, dependence - 1) += 1.0;
        }
    }
    return m;
}

GldmFeatures gldm_features(const DiscretizedImage& d) {
    const SizeMatrixStats s = size_matrix_stats(gldm_matrix(d));
    const double n = s.total;
    return {safe_div(s.small, n),     safe_div(s.large, n),      safe_div(s.gray_nu, n),
            safe_div(s.size_nu, n),   safe_div(s.size_nu, n * n), s.gray_var,
            s.size_var,               s.entropy,                 safe_div(s.low_gray, n),
            safe_div(s.high_gray, n), safe_div(s.small_low, n),  safe_div(s.small_high, n),
            safe_div(s.large_low, n), safe_div(s.large_high, n)};
}

// ---------------------------------------------------------------------------
// NGTDM

NgtdmTable ngtdm_table(const DiscretizedImage& d) {
    NgtdmTable t;
    t.count.assign(static_cast<std::size_t>(d.bin_count), 0.0);
    t.s.assign(static_cast<std::size_t>(d.bin_count), 0.0);
    const auto h = static_cast<std::ptrdiff_t>(d.height);
    const auto w = static_cast<std::ptrdiff_t>(d.width);
    for (std::ptrdiff_t r = 0; r < h; ++r) {
        for (std::ptrdiff_t c = 0; c < w; ++c) {
            double sum = 0.0;
            int n = 0;
            for (const auto& off : kNeighbours8) {
                const std::ptrdiff_t rr = r + off[0], cc = c + off[1];
                if (!in_bounds(d, rr, cc)) continue;
                sum += d.levels[static_cast<std::size_t>(rr * w + cc)];
                ++n;
            }
            if (n == 0) continue;
            const int level = d.levels[static_cast<std::size_t>(r * w + c)];
            t.count[static_cast<std::size_t>(level - 1)] += 1.0;
            t.s[static_cast<std::size_t>(level - 1)] += std::abs(level - sum / n);
            t.valid_pixels += 1.0;
        }
    }
    return t;
}

NgtdmFeatures ngtdm_features(const DiscretizedImage& d) {
    const NgtdmTable t = ngtdm_table(d);
    NgtdmFeatures f{};
    if (t.valid_pixels <= 0.0) {
        f[0] = kCoarsenessCap;
        return f;
    }
    struct Level {
        double i, p, s;
    };
    std::vector<Level> present;
    double s_total = 0.0;
    for (std::size_t k = 0; k < t.count.size(); ++k) {
        if (t.count[k] > 0.0) present.push_back({static_cast<double>(k + 1), t.count[k] / t.valid_pixels, t.s[k]});
        s_total += t.s[k];
    }
    const double ngp = static_cast<double>(present.size());

    double ps = 0.0;
    for (const auto& l : present) ps += l.p * l.s;

    double contrast_pairs = 0.0, busy_den = 0.0, complexity = 0.0, strength_num = 0.0;
    for (const auto& a : present) {
        for (const auto& b : present) {
            const double diff = a.i - b.i;
            contrast_pairs += a.p * b.p * diff * diff;
            busy_den += std::abs(a.i * a.p - b.i * b.p);
            complexity += std::abs(diff) * (a.p * a.s + b.p * b.s) / (a.p + b.p);
            strength_num += (a.p + b.p) * diff * diff;
        }
    }

    f[0] = ps > 0.0 ? 1.0 / ps : kCoarsenessCap;
    f[1] = ngp > 1.0 ? contrast_pairs / (ngp * (ngp - 1.0)) * s_total / t.valid_pixels : 0.0;
    f[2] = safe_div(ps, busy_den);
    f[3] = complexity / t.valid_pixels;
    f[4] = safe_div(strength_num, s_total);
    return f;
}

// ---------------------------------------------------------------------------
// Assembly

std::array<double, kFeaturesPerVariant> variant_features(const Grid& grid, int bin_count) {
    std::array<double, kFeaturesPerVariant> out{};
    auto it = out.begin();
    const auto append = [&it](const auto& block) { it = std::copy(block.begin(), block.end(), it); };
    append(first_order_features(grid, bin_count));
    const DiscretizedImage d = discretize(grid, bin_count);
    append(glcm_features(d));
    append(glrlm_features(d));
    append(glszm_features(d));
    append(gldm_features(d));
    append(ngtdm_features(d));
    return out;
}

namespace {

std::size_t family_offset(FeatureFamily f) {
    std::size_t offset = 0;
    for (FeatureFamily g : kAllFamilies) {
        if (g == f) return offset;
        offset += family_feature_names(g).size();
    }
    return offset;
}

// Computes only the families the catalog asks for on one variant grid.
std::array<double, kFeaturesPerVariant> selected_features(const Grid& grid, int bin_count,
                                                          const std::array<bool, 6>& want) {
    std::array<double, kFeaturesPerVariant> out{};
    const auto put = [&out](FeatureFamily f, const auto& block) {
        std::copy(block.begin(), block.end(), out.begin() + static_cast<std::ptrdiff_t>(family_offset(f)));
    };
    if (want[0]) put(FeatureFamily::FirstOrder, first_order_features(grid, bin_count));
    if (!(want[1] || want[2] || want[3] || want[4] || want[5])) return out;
    const DiscretizedImage d = discretize(grid, bin_count);
    if (want[1]) put(FeatureFamily::GLCM, glcm_features(d));
    if (want[2]) put(FeatureFamily::GLRLM, glrlm_features(d));
    if (want[3]) put(FeatureFamily::GLSZM, glszm_features(d));
    if (want[4]) put(FeatureFamily::GLDM, gldm_features(d));
    if (want[5]) put(FeatureFamily::NGTDM, ngtdm_features(d));
    return out;
}

}  // namespace

std::vector<double> extract_image_features(const Grid& pixels, const FeatureCatalog& catalog, int bin_count,
                                           const WaveletKernel& kernel) {
    if (bin_count < 2) throw Error(ErrorKind::ParamError, "bin count must be at least 2");
    std::vector<double> row(catalog.size(), 0.0);
    if (!catalog.original_only()) kernel.validate();
    for (FilterVariant v : catalog.variants()) {
        std::array<bool, 6> want{};
        for (const auto& e : catalog.entries()) {
            if (e.variant == v) want[static_cast<std::size_t>(e.family)] = true;
        }
        const Grid filtered = filter_variant(pixels, kernel, v);
        const auto block = selected_features(filtered, bin_count, want);
        for (std::size_t j = 0; j < catalog.size(); ++j) {
            const auto& e = catalog[j];
            if (e.variant != v) continue;
            row[j] = block[family_offset(e.family) + *feature_index_in_family(e.family, e.name)];
        }
    }
    return row;
}

FeatureMatrix extract_features(const ImageSet& set, const FeatureCatalog& catalog, const ExtractOptions& options) {
    if (set.empty()) throw Error(ErrorKind::EmptyInput, "image set '" + set.name + "' is empty");
    if (catalog.empty()) throw Error(ErrorKind::CatalogError, "empty feature catalog");
    if (options.bin_count < 2) throw Error(ErrorKind::ParamError, "bin count must be at least 2");
    if (!catalog.original_only()) options.kernel.validate();

    FeatureMatrix m;
    m.catalog = catalog;
    m.ids.reserve(set.size());
    for (const auto& img : set.images) m.ids.push_back(img.id);
    m.values.resize(static_cast<Eigen::Index>(set.size()), static_cast<Eigen::Index>(catalog.size()));

    std::vector<std::vector<double>> rows(set.size());
    parallel_for(set.size(), options.workers, [&](std::size_t i) {
        rows[i] = extract_image_features(set.images[i].pixels, catalog, options.bin_count, options.kernel);
        for (std::size_t j = 0; j < catalog.size(); ++j) {
            if (!std::isfinite(rows[i][j])) {
                const auto& e = catalog[j];
                throw Error(ErrorKind::InternalError, "non-finite feature for image '" + set.images[i].id +
                                                          "', variant " + std::string(variant_name(e.variant)) +
                                                          ", feature " + std::string(family_name(e.family)) + " " +
                                                          e.name);
            }
        }
    });
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < catalog.size(); ++j) {
            m.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
        }
    }
    return m;
}

}  // namespace frd
