#include "frd/catalog.hpp"

#include "frd/error.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <set>

namespace frd {

namespace {

constexpr std::string_view kFirstOrderNames[] = {
    "Energy", "TotalEnergy", "Entropy", "Minimum", "10Percentile", "90Percentile",
    "Maximum", "Mean", "Median", "InterquartileRange", "Range", "MeanAbsoluteDeviation",
    "RobustMeanAbsoluteDeviation", "RootMeanSquared", "Skewness", "Kurtosis", "Variance", "Uniformity"};

constexpr std::string_view kGlcmNames[] = {
    "Autocorrelation", "JointAverage", "ClusterProminence", "ClusterShade", "ClusterTendency",
    "Contrast", "Correlation", "DifferenceAverage", "DifferenceEntropy", "DifferenceVariance",
    "JointEnergy", "JointEntropy", "Imc1", "Imc2", "Idm", "MCC", "Idmn", "Id", "Idn",
    "InverseVariance", "MaximumProbability", "SumAverage", "SumEntropy", "SumSquares"};

constexpr std::string_view kGlrlmNames[] = {
    "ShortRunEmphasis", "LongRunEmphasis", "GrayLevelNonUniformity", "GrayLevelNonUniformityNormalized",
    "RunLengthNonUniformity", "RunLengthNonUniformityNormalized", "RunPercentage", "GrayLevelVariance",
    "RunVariance", "RunEntropy", "LowGrayLevelRunEmphasis", "HighGrayLevelRunEmphasis",
    "ShortRunLowGrayLevelEmphasis", "ShortRunHighGrayLevelEmphasis", "LongRunLowGrayLevelEmphasis",
    "LongRunHighGrayLevelEmphasis"};

constexpr std::string_view kGlszmNames[] = {
    "SmallAreaEmphasis", "LargeAreaEmphasis", "GrayLevelNonUniformity", "GrayLevelNonUniformityNormalized",
    "SizeZoneNonUniformity", "SizeZoneNonUniformityNormalized", "ZonePercentage", "GrayLevelVariance",
    "ZoneVariance", "ZoneEntropy", "LowGrayLevelZoneEmphasis", "HighGrayLevelZoneEmphasis",
    "SmallAreaLowGrayLevelEmphasis", "SmallAreaHighGrayLevelEmphasis", "LargeAreaLowGrayLevelEmphasis",
    "LargeAreaHighGrayLevelEmphasis"};

constexpr std::string_view kGldmNames[] = {
    "SmallDependenceEmphasis", "LargeDependenceEmphasis", "GrayLevelNonUniformity",
    "DependenceNonUniformity", "DependenceNonUniformityNormalized", "GrayLevelVariance",
    "DependenceVariance", "DependenceEntropy", "LowGrayLevelEmphasis", "HighGrayLevelEmphasis",
    "SmallDependenceLowGrayLevelEmphasis", "SmallDependenceHighGrayLevelEmphasis",
    "LargeDependenceLowGrayLevelEmphasis", "LargeDependenceHighGrayLevelEmphasis"};

constexpr std::string_view kNgtdmNames[] = {"Coarseness", "Contrast", "Busyness", "Complexity", "Strength"};

}  // namespace

std::string_view family_name(FeatureFamily f) {
    switch (f) {
        case FeatureFamily::FirstOrder: return "firstorder";
        case FeatureFamily::GLCM: return "glcm";
        case FeatureFamily::GLRLM: return "glrlm";
        case FeatureFamily::GLSZM: return "glszm";
        case FeatureFamily::GLDM: return "gldm";
        case FeatureFamily::NGTDM: return "ngtdm";
    }
    return "?";
}

std::string_view family_tag(FeatureFamily f) {
    return f == FeatureFamily::FirstOrder ? "first" : family_name(f);
}

std::optional<FeatureFamily> parse_family_name(std::string_view name) {
    for (FeatureFamily f : kAllFamilies) {
        if (family_name(f) == name) return f;
    }
    return std::nullopt;
}

std::optional<FeatureFamily> parse_family_tag(std::string_view tag) {
    for (FeatureFamily f : kAllFamilies) {
        if (family_tag(f) == tag) return f;
    }
    return std::nullopt;
}

std::span<const std::string_view> family_feature_names(FeatureFamily f) {
    switch (f) {
        case FeatureFamily::FirstOrder: return kFirstOrderNames;
        case FeatureFamily::GLCM: return kGlcmNames;
        case FeatureFamily::GLRLM: return kGlrlmNames;
        case FeatureFamily::GLSZM: return kGlszmNames;
        case FeatureFamily::GLDM: return kGldmNames;
        case FeatureFamily::NGTDM: return kNgtdmNames;
    }
    return {};
}

std::optional<std::size_t> feature_index_in_family(FeatureFamily f, std::string_view name) {
    const auto names = family_feature_names(f);
    const auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) return std::nullopt;
    return static_cast<std::size_t>(it - names.begin());
}

std::string CatalogEntry::key() const {
    return std::string(variant_name(variant)) + "_" + std::string(family_name(family)) + "_" + name;
}

std::string CatalogEntry::label() const {
    return std::string(variant_name(variant)) + " " + std::string(family_name(family)) + " " + name;
}

FeatureCatalog::FeatureCatalog(std::vector<CatalogEntry> entries) : entries_(std::move(entries)) {
    std::set<std::string> seen;
    for (const auto& e : entries_) {
        if (!feature_index_in_family(e.family, e.name)) {
            throw Error(ErrorKind::CatalogError, "unknown " + std::string(family_name(e.family)) + " feature '" + e.name + "'");
        }
        if (!seen.insert(e.key()).second) throw Error(ErrorKind::CatalogError, "duplicate catalog entry " + e.key());
    }
}

FeatureCatalog FeatureCatalog::full() { return subset(kAllVariants, kAllFamilies); }

FeatureCatalog FeatureCatalog::subset(std::span<const FilterVariant> variants,
                                      std::span<const FeatureFamily> families) {
    std::vector<CatalogEntry> entries;
    for (FilterVariant v : kAllVariants) {
        if (std::find(variants.begin(), variants.end(), v) == variants.end()) continue;
        for (FeatureFamily f : kAllFamilies) {
            if (std::find(families.begin(), families.end(), f) == families.end()) continue;
            for (std::string_view n : family_feature_names(f)) entries.push_back({v, f, std::string(n)});
        }
    }
    return FeatureCatalog(std::move(entries));
}

FeatureCatalog FeatureCatalog::from_keys(std::span<const std::string> keys) {
    std::vector<CatalogEntry> entries;
    entries.reserve(keys.size());
    for (const auto& key : keys) {
        const auto first = key.find('_');
        const auto second = first == std::string::npos ? std::string::npos : key.find('_', first + 1);
        if (second == std::string::npos) throw Error(ErrorKind::CatalogError, "malformed feature key '" + key + "'");
        const auto variant = parse_variant_name(std::string_view(key).substr(0, first));
        const auto family = parse_family_name(std::string_view(key).substr(first + 1, second - first - 1));
        if (!variant || !family) throw Error(ErrorKind::CatalogError, "unknown feature key '" + key + "'");
        entries.push_back({*variant, *family, key.substr(second + 1)});
    }
    return FeatureCatalog(std::move(entries));
}

FeatureCatalog FeatureCatalog::from_json(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::CatalogError, std::string("catalog JSON: ") + e.what());
    }
    if (!doc.is_array()) throw Error(ErrorKind::CatalogError, "catalog JSON must be an array");
    std::vector<CatalogEntry> entries;
    for (const auto& item : doc) {
        if (!item.is_object() || !item.contains("variant") || !item.contains("family") || !item.contains("name")) {
            throw Error(ErrorKind::CatalogError, "catalog entries need variant, family and name");
        }
        const auto variant = parse_variant_name(item["variant"].get<std::string>());
        const auto family = parse_family_name(item["family"].get<std::string>());
        if (!variant || !family) throw Error(ErrorKind::CatalogError, "unknown variant or family in " + item.dump());
        entries.push_back({*variant, *family, item["name"].get<std::string>()});
    }
    return FeatureCatalog(std::move(entries));
}

std::string FeatureCatalog::to_json() const {
    nlohmann::json doc = nlohmann::json::array();
    for (const auto& e : entries_) {
        doc.push_back({{"variant", variant_name(e.variant)}, {"family", family_name(e.family)}, {"name", e.name}});
    }
    return doc.dump(2);
}

std::vector<std::string> FeatureCatalog::keys() const {
    std::vector<std::string> out;
    out.reserve(entries_.size());
    for (const auto& e : entries_) out.push_back(e.key());
    return out;
}

std::optional<std::size_t> FeatureCatalog::index_of(const CatalogEntry& e) const {
    const auto it = std::find(entries_.begin(), entries_.end(), e);
    if (it == entries_.end()) return std::nullopt;
    return static_cast<std::size_t>(it - entries_.begin());
}

bool FeatureCatalog::original_only() const {
    return std::all_of(entries_.begin(), entries_.end(),
                       [](const CatalogEntry& e) { return e.variant == FilterVariant::Original; });
}

std::vector<FilterVariant> FeatureCatalog::variants() const {
    std::vector<FilterVariant> out;
    for (FilterVariant v : kAllVariants) {
        if (std::any_of(entries_.begin(), entries_.end(), [v](const CatalogEntry& e) { return e.variant == v; })) {
            out.push_back(v);
        }
    }
    return out;
}

}  // namespace frd
