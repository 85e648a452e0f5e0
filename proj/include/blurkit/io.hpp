#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "blurkit/image.hpp"

namespace blurkit {

// Unreadable/missing files. Maps to CLI exit code 2.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Readable but not a format we handle (or corrupt). Maps to CLI exit code 3.
struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Reads 8-bit binary PGM (P5) or PNG. RGB input is converted with the
// BT.601 luma weights 0.299/0.587/0.114; 8-bit values are divided by 255.
GrayImage load_gray(const std::string& path);

// Writes "P5\n<w> <h>\n255\n" followed by row-major round(v*255) bytes.
void save_pgm(const GrayImage& image, const std::string& path);

// Plain-text matrix: one row per line, space-separated, 6 fractional digits.
void save_text_matrix(const GrayImage& image, const std::string& path);

// Integer matrix variant (fire maps).
void save_text_matrix(int height, int width, const std::vector<int>& values,
                      const std::string& path);

}  // namespace blurkit
