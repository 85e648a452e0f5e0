#include "blurkit/io.hpp"

#include <png.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <memory>

namespace blurkit {

namespace {

constexpr double kLumaR = 0.299;
constexpr double kLumaG = 0.587;
constexpr double kLumaB = 0.114;

// Skips PGM whitespace and '#' comments, then parses one unsigned integer.
int read_pgm_int(std::istream& in, const std::string& path) {
    int ch = in.get();
    while (ch != EOF) {
        if (ch == '#') {
            while (ch != EOF && ch != '\n') ch = in.get();
        } else if (!std::isspace(ch)) {
            break;
        }
        ch = in.get();
    }
    if (ch == EOF || !std::isdigit(ch)) {
        throw FormatError("malformed PGM header in " + path);
    }
    int value = 0;
    while (ch != EOF && std::isdigit(ch)) {
        value = value * 10 + (ch - '0');
        if (value > 1 << 20) throw FormatError("unreasonable PGM header value in " + path);
        ch = in.get();
    }
    if (ch != EOF) in.unget();
    return value;
}

GrayImage load_pgm(std::ifstream& in, const std::string& path) {
    char magic[2];
    in.read(magic, 2);
    if (!in || magic[0] != 'P' || magic[1] != '5') {
        throw FormatError("not a binary PGM (P5): " + path);
    }
    const int width = read_pgm_int(in, path);
    const int height = read_pgm_int(in, path);
    const int maxval = read_pgm_int(in, path);
    if (width < 1 || height < 1) throw FormatError("degenerate PGM dimensions in " + path);
    if (maxval < 1 || maxval > 255) {
        throw FormatError("only 8-bit PGM supported (maxval " + std::to_string(maxval) + ") in " + path);
    }
    in.get();  // single whitespace byte after the header
    std::vector<unsigned char> bytes(static_cast<std::size_t>(width) * height);
    in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (static_cast<std::size_t>(in.gcount()) != bytes.size()) {
        throw FormatError("truncated PGM pixel data in " + path);
    }
    std::vector<double> data(bytes.size());
    for (std::size_t i = 0; i < bytes.size(); ++i) data[i] = bytes[i] / 255.0;
    return GrayImage(height, width, std::move(data));
}

struct PngReader {
    png_structp png = nullptr;
    png_infop info = nullptr;
    FILE* fp = nullptr;
    ~PngReader() {
        if (png) png_destroy_read_struct(&png, info ? &info : nullptr, nullptr);
        if (fp) std::fclose(fp);
    }
};

GrayImage load_png(const std::string& path) {
    PngReader r;
    r.fp = std::fopen(path.c_str(), "rb");
    if (!r.fp) throw IoError("cannot open " + path);

    r.png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    if (!r.png) throw FormatError("libpng init failed");
    r.info = png_create_info_struct(r.png);
    if (!r.info) throw FormatError("libpng init failed");

    // Header phase under its own longjmp target.
    if (setjmp(png_jmpbuf(r.png))) {
        throw FormatError("corrupt PNG: " + path);
    }
    png_init_io(r.png, r.fp);
    png_read_info(r.png, r.info);

    // Normalize everything to 8-bit gray or RGB without alpha.
    png_set_strip_16(r.png);
    png_set_strip_alpha(r.png);
    const png_byte color = png_get_color_type(r.png, r.info);
    if (color == PNG_COLOR_TYPE_PALETTE) png_set_palette_to_rgb(r.png);
    if (color == PNG_COLOR_TYPE_GRAY && png_get_bit_depth(r.png, r.info) < 8) {
        png_set_expand_gray_1_2_4_to_8(r.png);
    }
    png_read_update_info(r.png, r.info);

    const int width = static_cast<int>(png_get_image_width(r.png, r.info));
    const int height = static_cast<int>(png_get_image_height(r.png, r.info));
    const int channels = png_get_channels(r.png, r.info);
    if (width < 1 || height < 1) throw FormatError("degenerate PNG dimensions in " + path);
    if (channels != 1 && channels != 3) {
        throw FormatError("unsupported PNG channel layout in " + path);
    }

    const std::size_t stride = png_get_rowbytes(r.png, r.info);
    std::vector<unsigned char> row(stride);
    std::vector<double> data(static_cast<std::size_t>(width) * height);
    // Row phase re-arms the jump target so no initialization is skipped.
    if (setjmp(png_jmpbuf(r.png))) {
        throw FormatError("corrupt PNG pixel data: " + path);
    }
    for (int y = 0; y < height; ++y) {
        png_read_row(r.png, row.data(), nullptr);
        for (int x = 0; x < width; ++x) {
            double v;
            if (channels == 1) {
                v = row[x] / 255.0;
            } else {
                v = (kLumaR * row[3 * x] + kLumaG * row[3 * x + 1] + kLumaB * row[3 * x + 2]) / 255.0;
            }
            data[static_cast<std::size_t>(y) * width + x] = std::min(1.0, std::max(0.0, v));
        }
    }
    png_read_end(r.png, nullptr);
    return GrayImage(height, width, std::move(data));
}

}  // namespace

GrayImage load_gray(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);
    unsigned char sig[8] = {0};
    in.read(reinterpret_cast<char*>(sig), 8);
    if (in.gcount() < 2) throw FormatError("file too short: " + path);
    in.seekg(0);
    if (sig[0] == 'P' && sig[1] == '5') {
        return load_pgm(in, path);
    }
    if (in.gcount() == 8 && png_sig_cmp(sig, 0, 8) == 0) {
        in.close();
        return load_png(path);
    }
    throw FormatError("unsupported image format (expected PGM or PNG): " + path);
}

void save_pgm(const GrayImage& image, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path);
    out << "P5\n" << image.width() << " " << image.height() << "\n255\n";
    std::vector<unsigned char> bytes(image.pixel_count());
    for (std::size_t i = 0; i < bytes.size(); ++i) {
        bytes[i] = static_cast<unsigned char>(std::lround(image.raw()[i] * 255.0));
    }
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write failed for " + path);
}

void save_text_matrix(const GrayImage& image, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    char buf[32];
    for (int y = 0; y < image.height(); ++y) {
        for (int x = 0; x < image.width(); ++x) {
            std::snprintf(buf, sizeof(buf), "%.6f", image.at(y, x));
            out << (x ? " " : "") << buf;
        }
        out << "\n";
    }
    if (!out) throw IoError("write failed for " + path);
}

void save_text_matrix(int height, int width, const std::vector<int>& values,
                      const std::string& path) {
    if (values.size() != static_cast<std::size_t>(height) * width) {
        throw std::invalid_argument("matrix size does not match dimensions");
    }
    std::ofstream out(path);
    if (!out) throw IoError("cannot write " + path);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            out << (x ? " " : "") << values[static_cast<std::size_t>(y) * width + x];
        }
        out << "\n";
    }
    if (!out) throw IoError("write failed for " + path);
}

}  // namespace blurkit
