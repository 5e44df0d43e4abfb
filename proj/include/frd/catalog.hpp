/**
 * @file catalog.hpp
 * @brief Ordered list of (filter variant, feature family, feature name)
 *        triples defining the columns of a feature matrix.
 *
 * Column order of the full catalog is variant-major (Original, LL, LH, HL,
 * HH), then family (first order, GLCM, GLRLM, GLSZM, GLDM, NGTDM), then the
 * per-family name order listed in family_feature_names(). Column keys follow
 * the "<variant>_<family>_<feature>" convention, e.g.
 * "wavelet-HH_glcm_Contrast".
 */
#pragma once

#include "frd/wavelet.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace frd {

enum class FeatureFamily { FirstOrder, GLCM, GLRLM, GLSZM, GLDM, NGTDM };

inline constexpr std::array<FeatureFamily, 6> kAllFamilies{
    FeatureFamily::FirstOrder, FeatureFamily::GLCM,  FeatureFamily::GLRLM,
    FeatureFamily::GLSZM,      FeatureFamily::GLDM,  FeatureFamily::NGTDM};

/// "firstorder", "glcm", ...
std::string_view family_name(FeatureFamily f);
/// CLI tag: "first", "glcm", "glrlm", "glszm", "gldm", "ngtdm".
std::string_view family_tag(FeatureFamily f);
std::optional<FeatureFamily> parse_family_name(std::string_view name);
std::optional<FeatureFamily> parse_family_tag(std::string_view tag);

/// Feature names of a family in extraction order (18/24/16/16/14/5).
std::span<const std::string_view> family_feature_names(FeatureFamily f);

struct CatalogEntry {
    FilterVariant variant;
    FeatureFamily family;
    std::string name;

    /// Column key, e.g. "original_firstorder_Mean".
    std::string key() const;
    /// Human-readable label, e.g. "wavelet-HH glcm Contrast".
    std::string label() const;

    bool operator==(const CatalogEntry&) const = default;
};

class FeatureCatalog {
public:
    FeatureCatalog() = default;
    /// CatalogError on duplicates or names unknown to the family.
    explicit FeatureCatalog(std::vector<CatalogEntry> entries);

    /// All 5 variants x 93 features = 465 columns.
    static FeatureCatalog full();
    /// Full catalog restricted to the given variants and families, in catalog order.
    static FeatureCatalog subset(std::span<const FilterVariant> variants,
                                 std::span<const FeatureFamily> families);
    /// Parses column keys; CatalogError on unknown keys.
    static FeatureCatalog from_keys(std::span<const std::string> keys);
    /// Parses the JSON array produced by to_json().
    static FeatureCatalog from_json(std::string_view text);

    /// [{"variant": ..., "family": ..., "name": ...}, ...]
    std::string to_json() const;

    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }
    const std::vector<CatalogEntry>& entries() const noexcept { return entries_; }
    const CatalogEntry& operator[](std::size_t i) const { return entries_[i]; }

    std::vector<std::string> keys() const;
    /// Column index of an entry, if present.
    std::optional<std::size_t> index_of(const CatalogEntry& e) const;
    /// True when every entry uses the Original variant.
    bool original_only() const;
    /// Variants referenced by at least one entry, in canonical order.
    std::vector<FilterVariant> variants() const;

    bool operator==(const FeatureCatalog&) const = default;

private:
    std::vector<CatalogEntry> entries_;
};

/// Position of a feature name inside its family block.
std::optional<std::size_t> feature_index_in_family(FeatureFamily f, std::string_view name);

}  // namespace frd
