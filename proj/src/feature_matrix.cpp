#include "frd/feature_matrix.hpp"

#include "frd/error.hpp"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace frd {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ',')) {
        if (!field.empty() && field.back() == '\r') field.pop_back();
        out.push_back(field);
    }
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

}  // namespace

FeatureMatrix FeatureMatrix::select_rows(const std::vector<std::size_t>& row_indices) const {
    FeatureMatrix out;
    out.catalog = catalog;
    out.values.resize(static_cast<Eigen::Index>(row_indices.size()), values.cols());
    out.ids.reserve(row_indices.size());
    for (std::size_t i = 0; i < row_indices.size(); ++i) {
        const std::size_t r = row_indices[i];
        if (r >= rows()) throw Error(ErrorKind::DimError, "row index out of range");
        out.ids.push_back(ids[r]);
        out.values.row(static_cast<Eigen::Index>(i)) = values.row(static_cast<Eigen::Index>(r));
    }
    return out;
}

FeatureMatrix FeatureMatrix::select_columns(const FeatureCatalog& sub) const {
    FeatureMatrix out;
    out.ids = ids;
    out.catalog = sub;
    out.values.resize(values.rows(), static_cast<Eigen::Index>(sub.size()));
    for (std::size_t j = 0; j < sub.size(); ++j) {
        const auto src = catalog.index_of(sub[j]);
        if (!src) throw Error(ErrorKind::CatalogError, "feature " + sub[j].key() + " not in matrix");
        out.values.col(static_cast<Eigen::Index>(j)) = values.col(static_cast<Eigen::Index>(*src));
    }
    return out;
}

void check_shape(const FeatureMatrix& m) {
    if (static_cast<std::size_t>(m.values.rows()) != m.ids.size() ||
        static_cast<std::size_t>(m.values.cols()) != m.catalog.size()) {
        throw Error(ErrorKind::DimError, "feature matrix is " + std::to_string(m.values.rows()) + "x" +
                                             std::to_string(m.values.cols()) + " but has " +
                                             std::to_string(m.ids.size()) + " ids and " +
                                             std::to_string(m.catalog.size()) + " catalog entries");
    }
}

void require_same_catalog(const FeatureMatrix& a, const FeatureMatrix& b) {
    check_shape(a);
    check_shape(b);
    if (!(a.catalog == b.catalog)) {
        throw Error(ErrorKind::CatalogError, "feature matrices use different catalogs (" +
                                                 std::to_string(a.catalog.size()) + " vs " +
                                                 std::to_string(b.catalog.size()) + " columns)");
    }
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_features_csv(const FeatureMatrix& m, std::ostream& out) {
    check_shape(m);
    out << "id";
    for (const auto& e : m.catalog.entries()) out << ',' << e.key();
    out << '\n';
    for (std::size_t r = 0; r < m.rows(); ++r) {
        out << m.ids[r];
        for (std::size_t c = 0; c < m.cols(); ++c) {
            out << ',' << format_double(m.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)));
        }
        out << '\n';
    }
}

void write_features_csv(const FeatureMatrix& m, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::FileError, path.string() + ": cannot open for writing");
    write_features_csv(m, out);
    out.flush();
    if (!out) throw Error(ErrorKind::FileError, path.string() + ": write failed");
}

FeatureMatrix read_features_csv(std::istream& in, const std::string& source) {
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorKind::EmptyInput, source + ": empty feature file");
    auto header = split_csv_line(line);
    if (header.empty() || header.front() != "id") {
        throw Error(ErrorKind::FileError, source + ": header must start with 'id'");
    }
    header.erase(header.begin());

    FeatureMatrix m;
    m.catalog = FeatureCatalog::from_keys(header);
    std::vector<std::vector<double>> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != header.size() + 1) {
            throw Error(ErrorKind::FileError, source + ":" + std::to_string(line_no) + ": expected " +
                                                  std::to_string(header.size() + 1) + " fields, got " +
                                                  std::to_string(fields.size()));
        }
        std::vector<double> row(header.size());
        for (std::size_t c = 0; c < header.size(); ++c) {
            const std::string& f = fields[c + 1];
            char* end = nullptr;
            errno = 0;
            row[c] = std::strtod(f.c_str(), &end);
            if (f.empty() || end != f.c_str() + f.size()) {
                throw Error(ErrorKind::FileError, source + ":" + std::to_string(line_no) + ": bad number '" + f + "'");
            }
            if (!std::isfinite(row[c])) {
                throw Error(ErrorKind::NumericError, source + ":" + std::to_string(line_no) + ": non-finite value");
            }
        }
        m.ids.push_back(fields[0]);
        rows.push_back(std::move(row));
    }
    m.values.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(header.size()));
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < header.size(); ++c) {
            m.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
        }
    }
    return m;
}

FeatureMatrix read_features_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorKind::FileError, path.string() + ": cannot open for reading");
    return read_features_csv(in, path.string());
}

}  // namespace frd
