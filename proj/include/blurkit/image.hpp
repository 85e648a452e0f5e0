#pragma once

#include <span>
#include <vector>

namespace blurkit {

// Reflects an out-of-range index back into [0, n). Edge pixels repeat
// (half-sample symmetric extension), any distance folds correctly.
inline int mirror_index(int i, int n) {
    if (n == 1) return 0;
    const int period = 2 * n;
    i %= period;
    if (i < 0) i += period;
    return i < n ? i : period - 1 - i;
}

// Single-channel raster, row-major, intensities in [0, 1].
class GrayImage {
public:
    GrayImage() = default;
    GrayImage(int height, int width, double fill = 0.0);
    GrayImage(int height, int width, std::vector<double> data);

    int height() const { return height_; }
    int width() const { return width_; }
    std::size_t pixel_count() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    double at(int r, int c) const { return data_[static_cast<std::size_t>(r) * width_ + c]; }
    double& at(int r, int c) { return data_[static_cast<std::size_t>(r) * width_ + c]; }
    // Mirror-reflect border handling for any integer coordinate.
    double at_mirror(int r, int c) const {
        return at(mirror_index(r, height_), mirror_index(c, width_));
    }

    std::span<const double> pixels() const { return data_; }
    std::vector<double>& raw() { return data_; }
    const std::vector<double>& raw() const { return data_; }

private:
    int height_ = 0;
    int width_ = 0;
    std::vector<double> data_;
};

// Per-pixel sharpness map; same raster contract as GrayImage.
using BlurMap = GrayImage;

// Normalized 2-D Gaussian tap set sampled on [-radius, radius]^2.
struct GaussianKernel {
    double sigma = 0.0;
    int radius = 0;
    std::vector<double> weights;  // (2*radius+1)^2, row-major, sums to 1

    int side() const { return 2 * radius + 1; }
    double at(int dy, int dx) const {
        return weights[static_cast<std::size_t>(dy + radius) * side() + (dx + radius)];
    }
};

struct ImageStats {
    double high = 0.0;
    double low = 0.0;
    double avg = 0.0;
};

GaussianKernel gaussian_kernel(double sigma, int radius);
// Default radius ceil(3*sigma) captures >99% of the mass.
GaussianKernel gaussian_kernel(double sigma);

GrayImage convolve(const GrayImage& image, const GaussianKernel& kernel);

// Edge-preserving smoothing; spatial radius = ceil(2*sigma_spatial).
GrayImage bilateral_filter(const GrayImage& image, double sigma_spatial, double sigma_range);

ImageStats stats(const GrayImage& image);

}  // namespace blurkit
