/**
 * @file config.hpp
 * @brief Run parameters shared by the CLI subcommands.
 *
 * Config files hold one "key = value" pair per line; '#' starts a comment.
 * Values given on the command line take precedence over the file, which
 * takes precedence over the defaults below.
 */
#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>

namespace frd {

struct RunConfig {
    int bins = 32;
    std::string wavelet = "haar";
    std::string families = "all";
    std::string variants = "all";
    std::size_t size = 256;
    double percentile = 95.0;
    double epsilon = 1e-12;
    std::uint64_t seed = 42;
    std::size_t workers = 0;  // 0 = FRD_WORKERS or hardware concurrency
};

/// Parses key=value text. ParamError on malformed lines or unknown keys.
std::map<std::string, std::string> parse_config_text(const std::string& text, const std::string& source);
std::map<std::string, std::string> read_config_file(const std::filesystem::path& path);

/// Overwrites fields named in `values`. ParamError on bad values.
void apply_config(RunConfig& config, const std::map<std::string, std::string>& values);

}  // namespace frd
