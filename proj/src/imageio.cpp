#include "frd/imageio.hpp"

#include "frd/error.hpp"
#include "frd/parallel.hpp"

#include <png.h>

#include <algorithm>
#include <array>
#include <bit>
#include <cctype>
#include <cmath>
#include <csetjmp>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>
#include <memory>
#include <vector>

namespace fs = std::filesystem;

namespace frd {

namespace {

std::string lower_extension(const fs::path& path) {
    std::string ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext;
}

std::optional<ImageFormat> format_of(const fs::path& path) {
    const std::string ext = lower_extension(path);
    if (ext == ".png") return ImageFormat::Png;
    if (ext == ".pgm") return ImageFormat::Pgm;
    if (ext == ".rawf32") return ImageFormat::RawF32;
    return std::nullopt;
}

[[noreturn]] void file_error(const fs::path& path, const std::string& what) {
    throw Error(ErrorKind::FileError, path.string() + ": " + what);
}

std::vector<unsigned char> read_bytes(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) file_error(path, "cannot open for reading");
    std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) file_error(path, "read failed");
    return bytes;
}

double divisor_for(int format_max, std::optional<int> bit_depth_hint, const fs::path& path) {
    if (!bit_depth_hint) return static_cast<double>(format_max);
    if (*bit_depth_hint < 1 || *bit_depth_hint > 16) {
        throw Error(ErrorKind::ParamError, path.string() + ": bit depth hint must be in 1..16");
    }
    return static_cast<double>((1u << *bit_depth_hint) - 1u);
}

double clip01(double v) { return std::clamp(v, 0.0, 1.0); }

// ---------------------------------------------------------------------------
// PNG

struct PngDecoded {
    std::uint32_t height = 0;
    std::uint32_t width = 0;
    int bit_depth = 0;
    int color_type = 0;
    std::vector<unsigned char> rows;  // packed, big-endian for 16 bit
    char message[256] = {};
};

struct PngMemoryReader {
    const std::vector<unsigned char>* bytes;
    std::size_t offset;
};

void png_read_from_memory(png_structp png, png_bytep out, png_size_t count) {
    auto* src = static_cast<PngMemoryReader*>(png_get_io_ptr(png));
    if (src->offset + count > src->bytes->size()) png_error(png, "truncated data");
    std::memcpy(out, src->bytes->data() + src->offset, count);
    src->offset += count;
}

void png_record_error(png_structp png, png_const_charp msg) {
    auto* decoded = static_cast<PngDecoded*>(png_get_error_ptr(png));
    std::snprintf(decoded->message, sizeof(decoded->message), "%s", msg);
    png_longjmp(png, 1);
}

void png_ignore_warning(png_structp, png_const_charp) {}

// Returns false with decoded->message set on failure. No C++ objects with
// destructors are created between setjmp and the last libpng call.
bool decode_png(const std::vector<unsigned char>& bytes, PngDecoded* decoded) {
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, decoded, png_record_error, png_ignore_warning);
    if (png == nullptr) {
        std::snprintf(decoded->message, sizeof(decoded->message), "libpng initialisation failed");
        return false;
    }
    png_infop info = png_create_info_struct(png);
    PngMemoryReader reader{&bytes, 0};
    if (info == nullptr || setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        if (decoded->message[0] == '\0') std::snprintf(decoded->message, sizeof(decoded->message), "decode failed");
        return false;
    }
    png_set_read_fn(png, &reader, png_read_from_memory);
    png_read_info(png, info);
    decoded->width = png_get_image_width(png, info);
    decoded->height = png_get_image_height(png, info);
    decoded->bit_depth = png_get_bit_depth(png, info);
    decoded->color_type = png_get_color_type(png, info);
    if (decoded->color_type != PNG_COLOR_TYPE_GRAY) {
        png_destroy_read_struct(&png, &info, nullptr);
        return true;  // caller reports the channel error
    }
    if (decoded->bit_depth < 8) png_set_expand_gray_1_2_4_to_8(png);
    png_read_update_info(png, info);
    const std::size_t rowbytes = png_get_rowbytes(png, info);
    decoded->bit_depth = png_get_bit_depth(png, info);
    decoded->rows.resize(rowbytes * decoded->height);
    for (std::uint32_t r = 0; r < decoded->height; ++r) {
        png_read_row(png, decoded->rows.data() + r * rowbytes, nullptr);
    }
    png_read_end(png, nullptr);
    png_destroy_read_struct(&png, &info, nullptr);
    return true;
}

Grid read_png(const fs::path& path, std::optional<int> hint) {
    const auto bytes = read_bytes(path);
    auto decoded = std::make_unique<PngDecoded>();
    if (!decode_png(bytes, decoded.get())) file_error(path, std::string("invalid PNG: ") + decoded->message);
    if (decoded->color_type != PNG_COLOR_TYPE_GRAY) {
        throw Error(ErrorKind::ChannelError,
                    path.string() + ": PNG is not single-channel grayscale (color type " +
                        std::to_string(decoded->color_type) + ")");
    }
    if (decoded->width == 0 || decoded->height == 0) file_error(path, "empty PNG");

    const bool wide = decoded->bit_depth == 16;
    const double div = divisor_for(wide ? 65535 : 255, hint, path);
    Grid grid(decoded->height, decoded->width);
    const unsigned char* p = decoded->rows.data();
    auto values = grid.values();
    for (std::size_t i = 0; i < values.size(); ++i) {
        const unsigned v = wide ? (static_cast<unsigned>(p[2 * i]) << 8) | p[2 * i + 1] : p[i];
        values[i] = clip01(v / div);
    }
    return grid;
}

struct PngWriteState {
    char message[256] = {};
};

void png_write_to_file(png_structp png, png_bytep data, png_size_t count) {
    auto* file = static_cast<std::FILE*>(png_get_io_ptr(png));
    if (std::fwrite(data, 1, count, file) != count) png_error(png, "write failed");
}

void png_flush_file(png_structp png) { std::fflush(static_cast<std::FILE*>(png_get_io_ptr(png))); }

void png_write_error(png_structp png, png_const_charp msg) {
    auto* state = static_cast<PngWriteState*>(png_get_error_ptr(png));
    std::snprintf(state->message, sizeof(state->message), "%s", msg);
    png_longjmp(png, 1);
}

bool encode_png(std::FILE* file, std::uint32_t height, std::uint32_t width,
                const std::vector<unsigned char>& big_endian16, PngWriteState* state) {
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, state, png_write_error, png_ignore_warning);
    if (png == nullptr) return false;
    png_infop info = png_create_info_struct(png);
    if (info == nullptr || setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        return false;
    }
    png_set_write_fn(png, file, png_write_to_file, png_flush_file);
    png_set_IHDR(png, info, width, height, 16, PNG_COLOR_TYPE_GRAY, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    for (std::uint32_t r = 0; r < height; ++r) {
        png_write_row(png, big_endian16.data() + static_cast<std::size_t>(r) * width * 2);
    }
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    return true;
}

// ---------------------------------------------------------------------------
// PGM

class PgmHeaderReader {
public:
    explicit PgmHeaderReader(const std::vector<unsigned char>& bytes) : bytes_(bytes) {}

    std::optional<unsigned long> next_int() {
        skip_space_and_comments();
        unsigned long v = 0;
        bool any = false;
        while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
            v = v * 10 + (bytes_[pos_] - '0');
            if (v > 0xFFFFFFFFul) return std::nullopt;
            ++pos_;
            any = true;
        }
        if (!any) return std::nullopt;
        return v;
    }

    // Binary data begins after exactly one whitespace byte following maxval.
    std::size_t binary_start() const { return pos_ + 1; }

private:
    void skip_space_and_comments() {
        while (pos_ < bytes_.size()) {
            if (std::isspace(bytes_[pos_])) {
                ++pos_;
            } else if (bytes_[pos_] == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
            } else {
                break;
            }
        }
    }

    const std::vector<unsigned char>& bytes_;
    std::size_t pos_ = 2;
};

Grid read_pgm(const fs::path& path, std::optional<int> hint) {
    const auto bytes = read_bytes(path);
    if (bytes.size() < 2 || bytes[0] != 'P') file_error(path, "missing PNM magic number");
    const char kind = static_cast<char>(bytes[1]);
    if (kind == '3' || kind == '6' || kind == '7') {
        throw Error(ErrorKind::ChannelError, path.string() + ": multi-channel PNM (P" + std::string(1, kind) + ")");
    }
    if (kind != '2' && kind != '5') file_error(path, "unsupported PNM variant P" + std::string(1, kind));

    PgmHeaderReader header(bytes);
    const auto width = header.next_int();
    const auto height = header.next_int();
    const auto maxval = header.next_int();
    if (!width || !height || !maxval || *width == 0 || *height == 0 || *maxval == 0 || *maxval > 65535) {
        file_error(path, "malformed PGM header");
    }
    const double div = divisor_for(static_cast<int>(*maxval), hint, path);
    Grid grid(*height, *width);
    auto values = grid.values();

    if (kind == '5') {
        const std::size_t bpp = *maxval > 255 ? 2 : 1;
        const std::size_t start = header.binary_start();
        if (start > bytes.size() || bytes.size() - start < values.size() * bpp) file_error(path, "truncated PGM data");
        const unsigned char* p = bytes.data() + start;
        for (std::size_t i = 0; i < values.size(); ++i) {
            const unsigned v = bpp == 2 ? (static_cast<unsigned>(p[2 * i]) << 8) | p[2 * i + 1] : p[i];
            values[i] = clip01(v / div);
        }
    } else {
        for (double& v : values) {
            const auto sample = header.next_int();
            if (!sample) file_error(path, "truncated PGM data");
            v = clip01(static_cast<double>(*sample) / div);
        }
    }
    return grid;
}

// ---------------------------------------------------------------------------
// raw float32

std::uint32_t load_u32_le(const unsigned char* p) {
    return static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
           (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
}

void store_u32_le(std::uint32_t v, unsigned char* p) {
    for (int i = 0; i < 4; ++i) p[i] = static_cast<unsigned char>(v >> (8 * i));
}

Grid read_rawf32(const fs::path& path) {
    const auto bytes = read_bytes(path);
    if (bytes.size() < 8) file_error(path, "truncated raw header");
    const std::uint32_t height = load_u32_le(bytes.data());
    const std::uint32_t width = load_u32_le(bytes.data() + 4);
    const std::size_t count = static_cast<std::size_t>(height) * width;
    if (count == 0) file_error(path, "empty raw image");
    if (bytes.size() != 8 + 4 * count) file_error(path, "raw payload size does not match header");
    Grid grid(height, width);
    auto values = grid.values();
    for (std::size_t i = 0; i < count; ++i) {
        const float f = std::bit_cast<float>(load_u32_le(bytes.data() + 8 + 4 * i));
        if (!std::isfinite(f)) file_error(path, "non-finite sample at index " + std::to_string(i));
        values[i] = clip01(static_cast<double>(f));
    }
    return grid;
}

std::uint16_t quantize16(double v) {
    return static_cast<std::uint16_t>(std::lround(clip01(v) * 65535.0));
}

}  // namespace

bool is_supported_image(const fs::path& path) { return format_of(path).has_value(); }

Image load_image(const fs::path& path, std::optional<int> bit_depth_hint) {
    const auto format = format_of(path);
    if (!format) file_error(path, "unsupported file extension");
    Image img;
    img.id = path.stem().string();
    switch (*format) {
        case ImageFormat::Png: img.pixels = read_png(path, bit_depth_hint); break;
        case ImageFormat::Pgm: img.pixels = read_pgm(path, bit_depth_hint); break;
        case ImageFormat::RawF32: img.pixels = read_rawf32(path); break;
    }
    return img;
}

Grid resize_bilinear(const Grid& src, std::size_t out_height, std::size_t out_width) {
    if (src.empty()) throw Error(ErrorKind::EmptyInput, "cannot resize an empty grid");
    if (out_height == 0 || out_width == 0) throw Error(ErrorKind::ParamError, "target size must be positive");
    if (src.height() == out_height && src.width() == out_width) return src;

    auto axis = [](std::size_t in, std::size_t out, std::size_t i, std::size_t& lo, std::size_t& hi, double& t) {
        const double pos = out > 1 ? static_cast<double>(i) * static_cast<double>(in - 1) / static_cast<double>(out - 1)
                                   : 0.0;
        lo = std::min(static_cast<std::size_t>(std::floor(pos)), in - 1);
        hi = std::min(lo + 1, in - 1);
        t = pos - static_cast<double>(lo);
    };

    Grid out(out_height, out_width);
    for (std::size_t r = 0; r < out_height; ++r) {
        std::size_t r0, r1;
        double tr;
        axis(src.height(), out_height, r, r0, r1, tr);
        for (std::size_t c = 0; c < out_width; ++c) {
            std::size_t c0, c1;
            double tc;
            axis(src.width(), out_width, c, c0, c1, tc);
            const double top = src(r0, c0) + tc * (src(r0, c1) - src(r0, c0));
            const double bottom = src(r1, c0) + tc * (src(r1, c1) - src(r1, c0));
            out(r, c) = top + tr * (bottom - top);
        }
    }
    return out;
}

ImageSet load_image_set(const fs::path& dir, std::size_t target_size, std::optional<int> bit_depth_hint,
                        std::size_t workers) {
    if (target_size == 0) throw Error(ErrorKind::ParamError, "target size must be positive");
    std::error_code ec;
    if (!fs::is_directory(dir, ec)) file_error(dir, "not a directory");

    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir, ec)) {
        if (entry.is_regular_file() && is_supported_image(entry.path())) files.push_back(entry.path());
    }
    if (ec) file_error(dir, "cannot list directory: " + ec.message());
    if (files.empty()) throw Error(ErrorKind::EmptyInput, "no supported images in " + dir.string());
    std::sort(files.begin(), files.end());

    ImageSet set;
    set.name = dir.filename().string();
    if (set.name.empty()) set.name = dir.parent_path().filename().string();
    set.images.resize(files.size());
    parallel_for(files.size(), workers, [&](std::size_t i) {
        Image img = load_image(files[i], bit_depth_hint);
        img.pixels = resize_bilinear(img.pixels, target_size, target_size);
        set.images[i] = std::move(img);
    });
    set.canonicalize_order();
    return set;
}

void write_image(const Image& img, const fs::path& path) {
    const auto format = format_of(path);
    if (!format) file_error(path, "unsupported file extension");
    if (img.pixels.empty()) throw Error(ErrorKind::EmptyInput, "cannot write an empty image");
    const auto height = static_cast<std::uint32_t>(img.height());
    const auto width = static_cast<std::uint32_t>(img.width());
    const auto values = img.pixels.values();

    if (*format == ImageFormat::Png) {
        std::vector<unsigned char> buffer(values.size() * 2);
        for (std::size_t i = 0; i < values.size(); ++i) {
            const std::uint16_t q = quantize16(values[i]);
            buffer[2 * i] = static_cast<unsigned char>(q >> 8);
            buffer[2 * i + 1] = static_cast<unsigned char>(q & 0xFF);
        }
        std::unique_ptr<std::FILE, int (*)(std::FILE*)> file(std::fopen(path.string().c_str(), "wb"), &std::fclose);
        if (!file) file_error(path, "cannot open for writing");
        auto state = std::make_unique<PngWriteState>();
        if (!encode_png(file.get(), height, width, buffer, state.get())) {
            file_error(path, std::string("PNG encode failed: ") + state->message);
        }
        if (std::fflush(file.get()) != 0) file_error(path, "write failed");
        return;
    }

    std::vector<unsigned char> bytes;
    if (*format == ImageFormat::Pgm) {
        const std::string header = "P5\n" + std::to_string(width) + " " + std::to_string(height) + "\n65535\n";
        bytes.assign(header.begin(), header.end());
        bytes.reserve(bytes.size() + values.size() * 2);
        for (double v : values) {
            const std::uint16_t q = quantize16(v);
            bytes.push_back(static_cast<unsigned char>(q >> 8));
            bytes.push_back(static_cast<unsigned char>(q & 0xFF));
        }
    } else {
        bytes.resize(8 + 4 * values.size());
        store_u32_le(height, bytes.data());
        store_u32_le(width, bytes.data() + 4);
        for (std::size_t i = 0; i < values.size(); ++i) {
            store_u32_le(std::bit_cast<std::uint32_t>(static_cast<float>(values[i])), bytes.data() + 8 + 4 * i);
        }
    }
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) file_error(path, "cannot open for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) file_error(path, "write failed");
}

}  // namespace frd
