/**
 * @file frd_main.cpp
 * @brief Command-line front end: extract, distance, ood, interpret, corrupt
 *        and catalog subcommands.
 *
 * Exit codes: 0 success, 1 usage error, 2 data error. Results go to stdout
 * as JSON (or to the files named by flags); diagnostics go to stderr.
 */
#include "frd/config.hpp"
#include "frd/corruptions.hpp"
#include "frd/error.hpp"
#include "frd/feature_matrix.hpp"
#include "frd/imageio.hpp"
#include "frd/interpret.hpp"
#include "frd/metrics.hpp"
#include "frd/ood.hpp"
#include "frd/parallel.hpp"
#include "frd/radiomics.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream in(text);
    std::string item;
    while (std::getline(in, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

std::vector<frd::FeatureFamily> parse_families(const std::string& text) {
    if (text == "all") return {frd::kAllFamilies.begin(), frd::kAllFamilies.end()};
    std::vector<frd::FeatureFamily> out;
    for (const auto& item : split_list(text)) {
        auto f = frd::parse_family_tag(item);
        if (!f) f = frd::parse_family_name(item);
        if (!f) throw frd::Error(frd::ErrorKind::ParamError, "--families: unknown family '" + item + "'");
        out.push_back(*f);
    }
    if (out.empty()) throw frd::Error(frd::ErrorKind::ParamError, "--families is empty");
    return out;
}

std::vector<frd::FilterVariant> parse_variants(const std::string& text) {
    if (text == "all") return {frd::kAllVariants.begin(), frd::kAllVariants.end()};
    std::vector<frd::FilterVariant> out;
    for (const auto& item : split_list(text)) {
        auto v = frd::parse_variant_tag(item);
        if (!v) v = frd::parse_variant_name(item);
        if (!v) throw frd::Error(frd::ErrorKind::ParamError, "--variants: unknown variant '" + item + "'");
        out.push_back(*v);
    }
    if (out.empty()) throw frd::Error(frd::ErrorKind::ParamError, "--variants is empty");
    return out;
}

struct ExtractionSetup {
    frd::FeatureCatalog catalog;
    frd::WaveletKernel kernel;
};

ExtractionSetup extraction_setup(const frd::RunConfig& cfg, const std::string& catalog_path) {
    ExtractionSetup setup;
    std::vector<frd::FilterVariant> variants = parse_variants(cfg.variants);
    if (cfg.wavelet == "none") {
        variants.erase(std::remove_if(variants.begin(), variants.end(),
                                      [](frd::FilterVariant v) { return v != frd::FilterVariant::Original; }),
                       variants.end());
        if (variants.empty()) {
            throw frd::Error(frd::ErrorKind::ParamError, "--wavelet none leaves no variants to extract");
        }
        setup.kernel = frd::WaveletKernel::haar();
    } else {
        const auto kernel = frd::kernel_by_name(cfg.wavelet);
        if (!kernel) throw frd::Error(frd::ErrorKind::ParamError, "--wavelet: unknown kernel '" + cfg.wavelet + "'");
        setup.kernel = *kernel;
    }
    if (!catalog_path.empty()) {
        std::ifstream in(catalog_path);
        if (!in) throw frd::Error(frd::ErrorKind::FileError, catalog_path + ": cannot open for reading");
        std::stringstream buf;
        buf << in.rdbuf();
        setup.catalog = frd::FeatureCatalog::from_json(buf.str());
        if (cfg.wavelet == "none" && !setup.catalog.original_only()) {
            throw frd::Error(frd::ErrorKind::CatalogError, "--wavelet none conflicts with wavelet entries in " + catalog_path);
        }
    } else {
        setup.catalog = frd::FeatureCatalog::subset(variants, parse_families(cfg.families));
    }
    return setup;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw frd::Error(frd::ErrorKind::FileError, path + ": cannot open for writing");
    out << text << '\n';
    if (!out) throw frd::Error(frd::ErrorKind::FileError, path + ": write failed");
}

frd::NormalizeRef parse_normalize(const std::string& text) {
    if (text == "a") return frd::NormalizeRef::A;
    if (text == "joint") return frd::NormalizeRef::Joint;
    throw frd::Error(frd::ErrorKind::ParamError, "--normalize must be 'a' or 'joint'");
}

// Flag values are captured separately so that only flags actually given on
// the command line override the config file.
struct Overrides {
    int bins = 32;
    std::string wavelet = "haar";
    std::string families = "all";
    std::string variants = "all";
    std::size_t size = 256;
    double percentile = 95.0;
    double epsilon = 1e-12;
    std::uint64_t seed = 42;
    std::size_t workers = 0;
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fréchet Radiomic Distance toolkit"};
    app.require_subcommand(1);

    Overrides flags;
    std::string config_path;
    app.add_option("--config", config_path, "key=value config file (flags take precedence)");
    auto* workers_opt = app.add_option("--workers", flags.workers, "worker threads (default: FRD_WORKERS or all cores)");

    // extract
    auto* extract = app.add_subcommand("extract", "extract radiomic features from a directory of images");
    std::string extract_input, extract_output, extract_catalog;
    std::optional<int> bit_depth;
    extract->add_option("--input", extract_input, "image directory")->required();
    extract->add_option("--output", extract_output, "feature CSV")->required();
    auto* bins_opt = extract->add_option("--bins", flags.bins, "gray-level bin count");
    auto* wavelet_opt = extract->add_option("--wavelet", flags.wavelet, "haar | coif1 | none");
    auto* families_opt = extract->add_option("--families", flags.families, "all or first,glcm,glrlm,glszm,gldm,ngtdm");
    auto* variants_opt = extract->add_option("--variants", flags.variants, "all or orig,ll,lh,hl,hh");
    auto* size_opt = extract->add_option("--size", flags.size, "canonical image side length");
    extract->add_option("--bit-depth", bit_depth, "integer bit depth of the inputs (default: container depth)");
    extract->add_option("--catalog", extract_catalog, "catalog JSON restricting the columns");

    // catalog
    auto* catalog_cmd = app.add_subcommand("catalog", "print the feature catalog as JSON");
    auto* cat_wavelet_opt = catalog_cmd->add_option("--wavelet", flags.wavelet, "haar | coif1 | none");
    auto* cat_families_opt = catalog_cmd->add_option("--families", flags.families, "family filter");
    auto* cat_variants_opt = catalog_cmd->add_option("--variants", flags.variants, "variant filter");

    // distance
    auto* distance = app.add_subcommand("distance", "distance between two feature CSVs");
    std::string dist_ref, dist_test, dist_metric = "frd", dist_bandwidth = "median";
    distance->add_option("--ref", dist_ref, "reference feature CSV")->required();
    distance->add_option("--test", dist_test, "test feature CSV")->required();
    distance->add_option("--metric", dist_metric, "frd | frd-v0 | frechet | mmd");
    auto* epsilon_opt = distance->add_option("--epsilon", flags.epsilon, "log floor for frd");
    distance->add_option("--bandwidth", dist_bandwidth, "MMD bandwidth or 'median'");

    // ood
    auto* ood = app.add_subcommand("ood", "out-of-distribution detection");
    ood->require_subcommand(1);
    auto* ood_detect = ood->add_subcommand("detect", "per-image OOD labels");
    std::string ood_ref, ood_test, ood_report;
    ood_detect->add_option("--ref", ood_ref, "in-distribution reference CSV")->required();
    ood_detect->add_option("--test", ood_test, "test CSV")->required();
    auto* percentile_opt = ood_detect->add_option("--percentile", flags.percentile, "threshold percentile");
    ood_detect->add_option("--report", ood_report, "also write the report JSON here");

    auto* ood_dataset = ood->add_subcommand("dataset", "dataset-level OOD score");
    ood_dataset->add_option("--ref", ood_ref, "in-distribution reference CSV")->required();
    ood_dataset->add_option("--test", ood_test, "test CSV")->required();

    auto* ood_classify = ood->add_subcommand("classify", "assign each test row to the closer reference");
    std::string ref_a, ref_b;
    ood_classify->add_option("--ref-a", ref_a, "reference set a (label 0, e.g. healthy)")->required();
    ood_classify->add_option("--ref-b", ref_b, "reference set b (label 1, e.g. abnormal)")->required();
    ood_classify->add_option("--test", ood_test, "test CSV")->required();
    ood_classify->add_option("--report", ood_report, "also write the report JSON here");

    // interpret
    auto* interpret = app.add_subcommand("interpret", "feature change report between two sets");
    std::string interp_a, interp_b, interp_out, interp_norm = "a";
    std::size_t top_k = 20;
    interpret->add_option("--a", interp_a, "source feature CSV")->required();
    interpret->add_option("--b", interp_b, "target feature CSV")->required();
    interpret->add_option("--top-k", top_k, "number of ranked entries to report");
    interpret->add_option("--out", interp_out, "report JSON path (default: stdout)");
    interpret->add_option("--normalize", interp_norm, "a | joint");

    // corrupt
    auto* corrupt = app.add_subcommand("corrupt", "write a corrupted copy of an image directory");
    std::string corrupt_input, corrupt_output, corrupt_kind, corrupt_format = "png";
    double severity = 0.0;
    corrupt->add_option("--input", corrupt_input, "image directory")->required();
    corrupt->add_option("--output", corrupt_output, "output directory")->required();
    corrupt->add_option("--kind", corrupt_kind, "noise | blur | swap | bias")->required();
    corrupt->add_option("--p", severity, "severity in [0, 100]")->required();
    auto* seed_opt = corrupt->add_option("--seed", flags.seed, "random seed");
    auto* corrupt_size_opt = corrupt->add_option("--size", flags.size, "canonical image side length");
    corrupt->add_option("--format", corrupt_format, "png | pgm | rawf32");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        frd::RunConfig cfg;
        if (!config_path.empty()) frd::apply_config(cfg, frd::read_config_file(config_path));
        if (*bins_opt) cfg.bins = flags.bins;
        if (*wavelet_opt || *cat_wavelet_opt) cfg.wavelet = flags.wavelet;
        if (*families_opt || *cat_families_opt) cfg.families = flags.families;
        if (*variants_opt || *cat_variants_opt) cfg.variants = flags.variants;
        if (*size_opt || *corrupt_size_opt) cfg.size = flags.size;
        if (*percentile_opt) cfg.percentile = flags.percentile;
        if (*epsilon_opt) cfg.epsilon = flags.epsilon;
        if (*seed_opt) cfg.seed = flags.seed;
        if (*workers_opt) cfg.workers = flags.workers;
        if (cfg.workers == 0) cfg.workers = frd::default_worker_count();

        if (*extract) {
            const ExtractionSetup setup = extraction_setup(cfg, extract_catalog);
            const frd::ImageSet set = frd::load_image_set(extract_input, cfg.size, bit_depth, cfg.workers);
            frd::ExtractOptions options;
            options.bin_count = cfg.bins;
            options.kernel = setup.kernel;
            options.workers = cfg.workers;
            const frd::FeatureMatrix m = frd::extract_features(set, setup.catalog, options);
            frd::write_features_csv(m, fs::path(extract_output));
            std::cerr << "extracted " << m.rows() << " x " << m.cols() << " features to " << extract_output << '\n';
            nlohmann::ordered_json summary{{"images", m.rows()}, {"features", m.cols()}, {"output", extract_output}};
            std::cout << summary.dump() << '\n';
        } else if (*catalog_cmd) {
            std::cout << extraction_setup(cfg, "").catalog.to_json() << '\n';
        } else if (*distance) {
            const auto metric = frd::parse_metric(dist_metric);
            if (!metric) throw frd::Error(frd::ErrorKind::ParamError, "--metric: unknown metric '" + dist_metric + "'");
            const frd::FeatureMatrix ref = frd::read_features_csv(fs::path(dist_ref));
            const frd::FeatureMatrix test = frd::read_features_csv(fs::path(dist_test));
            frd::DistanceResult result;
            switch (*metric) {
                case frd::MetricKind::FRD: result = frd::frd(ref, test, cfg.epsilon); break;
                case frd::MetricKind::FRDv0: result = frd::frd_v0(ref, test); break;
                case frd::MetricKind::Frechet: result = frd::frechet(ref, test); break;
                case frd::MetricKind::MMD: {
                    std::optional<double> bandwidth;
                    if (dist_bandwidth != "median") {
                        try {
                            bandwidth = std::stod(dist_bandwidth);
                        } catch (const std::exception&) {
                            throw frd::Error(frd::ErrorKind::ParamError, "--bandwidth must be a number or 'median'");
                        }
                    }
                    result = frd::mmd(ref, test, bandwidth);
                    break;
                }
            }
            for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';
            std::cout << result.to_json() << '\n';
        } else if (*ood_detect) {
            const frd::FeatureMatrix ref = frd::read_features_csv(fs::path(ood_ref));
            const frd::FeatureMatrix test = frd::read_features_csv(fs::path(ood_test));
            frd::DetectOptions options;
            options.percentile = cfg.percentile;
            const frd::OODReport report = frd::detect(test, ref, options);
            const std::string json = report.to_json();
            if (!ood_report.empty()) write_text(ood_report, json);
            std::cout << json << '\n';
        } else if (*ood_dataset) {
            const frd::FeatureMatrix ref = frd::read_features_csv(fs::path(ood_ref));
            const frd::FeatureMatrix test = frd::read_features_csv(fs::path(ood_test));
            nlohmann::ordered_json j{{"nfrd_group", frd::nfrd_group(test, ref)},
                                     {"n_id_ref", ref.rows()},
                                     {"n_test", test.rows()}};
            std::cout << j.dump() << '\n';
        } else if (*ood_classify) {
            const frd::FeatureMatrix a = frd::read_features_csv(fs::path(ref_a));
            const frd::FeatureMatrix b = frd::read_features_csv(fs::path(ref_b));
            const frd::FeatureMatrix test = frd::read_features_csv(fs::path(ood_test));
            frd::require_same_catalog(a, test);
            const frd::ReferenceClassifier classifier(a, b);
            nlohmann::ordered_json rows = nlohmann::ordered_json::array();
            std::size_t positives = 0;
            for (std::size_t r = 0; r < test.rows(); ++r) {
                const auto c = classifier.classify(test.values.row(static_cast<Eigen::Index>(r)).transpose());
                positives += static_cast<std::size_t>(c.label);
                rows.push_back({{"id", test.ids[r]}, {"label", c.label}, {"score_a", c.score_a}, {"score_b", c.score_b}});
            }
            nlohmann::ordered_json j{{"n_test", test.rows()}, {"n_label_1", positives}, {"results", rows}};
            const std::string json = j.dump(2);
            if (!ood_report.empty()) write_text(ood_report, json);
            std::cout << json << '\n';
        } else if (*interpret) {
            const frd::FeatureMatrix a = frd::read_features_csv(fs::path(interp_a));
            const frd::FeatureMatrix b = frd::read_features_csv(fs::path(interp_b));
            const frd::NormalizeRef norm = parse_normalize(interp_norm);
            const frd::DeltaReport report = frd::delta_report(a, b, norm);
            nlohmann::ordered_json j = nlohmann::ordered_json::parse(report.to_json(top_k));
            j["normalize"] = interp_norm;
            if (a.ids == b.ids || std::is_permutation(a.ids.begin(), a.ids.end(), b.ids.begin(), b.ids.end())) {
                j["image_changes"] = nlohmann::ordered_json::parse(
                    frd::image_changes_json(frd::rank_image_changes(a, b, norm), top_k));
            }
            const std::string json = j.dump(2);
            if (!interp_out.empty()) {
                write_text(interp_out, json);
            } else {
                std::cout << json << '\n';
            }
        } else if (*corrupt) {
            const auto kind = frd::parse_corruption(corrupt_kind);
            if (!kind) throw frd::Error(frd::ErrorKind::ParamError, "--kind: unknown corruption '" + corrupt_kind + "'");
            if (corrupt_format != "png" && corrupt_format != "pgm" && corrupt_format != "rawf32") {
                throw frd::Error(frd::ErrorKind::ParamError, "--format must be png, pgm or rawf32");
            }
            const frd::CorruptionSpec spec{*kind, severity, cfg.seed};
            const frd::ImageSet set = frd::load_image_set(corrupt_input, cfg.size, std::nullopt, cfg.workers);
            const frd::ImageSet out = frd::apply_corruption(set, spec, cfg.workers);
            std::error_code ec;
            fs::create_directories(corrupt_output, ec);
            if (ec) throw frd::Error(frd::ErrorKind::FileError, corrupt_output + ": " + ec.message());
            for (const auto& img : out.images) {
                frd::write_image(img, fs::path(corrupt_output) / (img.id + "." + corrupt_format));
            }
            nlohmann::ordered_json j{{"images", out.size()},
                                     {"kind", corrupt_kind},
                                     {"p", severity},
                                     {"seed", cfg.seed},
                                     {"output", corrupt_output}};
            std::cout << j.dump() << '\n';
        }
    } catch (const frd::Error& e) {
        std::cerr << e.what() << '\n';
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "InternalError: " << e.what() << '\n';
        return kExitData;
    }
    return 0;
}
