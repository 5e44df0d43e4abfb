#include "frd/config.hpp"

#include "frd/error.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace frd {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

const char* const kKnownKeys[] = {"bins",    "wavelet", "families", "variants", "size",
                                  "percentile", "epsilon", "seed",  "workers"};

bool known_key(const std::string& key) {
    for (const char* k : kKnownKeys) {
        if (key == k) return true;
    }
    return false;
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        T out{};
        if constexpr (std::is_same_v<T, double>) {
            out = std::stod(value, &used);
        } else {
            if (!value.empty() && value.front() == '-') throw std::invalid_argument("negative");
            out = static_cast<T>(std::stoull(value, &used));
        }
        if (used != value.size()) throw std::invalid_argument("trailing characters");
        return out;
    } catch (const std::exception&) {
        throw Error(ErrorKind::ParamError, "config key '" + key + "' has invalid value '" + value + "'");
    }
}

}  // namespace

std::map<std::string, std::string> parse_config_text(const std::string& text, const std::string& source) {
    std::map<std::string, std::string> values;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw Error(ErrorKind::ParamError, source + ":" + std::to_string(line_no) + ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!known_key(key)) {
            throw Error(ErrorKind::ParamError, source + ":" + std::to_string(line_no) + ": unknown key '" + key + "'");
        }
        values[key] = value;
    }
    return values;
}

std::map<std::string, std::string> read_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::FileError, "cannot read config " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path.string());
}

void apply_config(RunConfig& config, const std::map<std::string, std::string>& values) {
    for (const auto& [key, value] : values) {
        if (key == "bins") {
            config.bins = static_cast<int>(parse_number<unsigned long long>(key, value));
        } else if (key == "wavelet") {
            config.wavelet = value;
        } else if (key == "families") {
            config.families = value;
        } else if (key == "variants") {
            config.variants = value;
        } else if (key == "size") {
            config.size = parse_number<std::size_t>(key, value);
        } else if (key == "percentile") {
            config.percentile = parse_number<double>(key, value);
        } else if (key == "epsilon") {
            config.epsilon = parse_number<double>(key, value);
        } else if (key == "seed") {
            config.seed = parse_number<std::uint64_t>(key, value);
        } else if (key == "workers") {
            config.workers = parse_number<std::size_t>(key, value);
        } else {
            throw Error(ErrorKind::ParamError, "unknown config key '" + key + "'");
        }
    }
}

}  // namespace frd
