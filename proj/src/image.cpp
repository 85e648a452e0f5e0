#include "blurkit/image.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace blurkit {

namespace {

void check_dims(int height, int width) {
    if (height < 1 || width < 1) {
        throw std::invalid_argument("image dimensions must be at least 1x1, got " +
                                    std::to_string(height) + "x" + std::to_string(width));
    }
}

}  // namespace

GrayImage::GrayImage(int height, int width, double fill) : height_(height), width_(width) {
    check_dims(height, width);
    if (fill < 0.0 || fill > 1.0) {
        throw std::invalid_argument("fill intensity out of [0,1]: " + std::to_string(fill));
    }
    data_.assign(static_cast<std::size_t>(height) * width, fill);
}

GrayImage::GrayImage(int height, int width, std::vector<double> data)
    : height_(height), width_(width), data_(std::move(data)) {
    check_dims(height, width);
    if (data_.size() != static_cast<std::size_t>(height) * width) {
        throw std::invalid_argument("pixel buffer size does not match dimensions");
    }
    for (double v : data_) {
        if (!(v >= 0.0 && v <= 1.0)) {
            throw std::invalid_argument("intensity out of [0,1]: " + std::to_string(v));
        }
    }
}

GaussianKernel gaussian_kernel(double sigma, int radius) {
    if (!(sigma > 0.0)) {
        throw std::invalid_argument("gaussian sigma must be positive, got " + std::to_string(sigma));
    }
    if (radius < 1) {
        throw std::invalid_argument("gaussian radius must be at least 1, got " + std::to_string(radius));
    }
    GaussianKernel k;
    k.sigma = sigma;
    k.radius = radius;
    const int side = 2 * radius + 1;
    k.weights.resize(static_cast<std::size_t>(side) * side);
    const double inv = 1.0 / (2.0 * sigma * sigma);
    double sum = 0.0;
    for (int dy = -radius; dy <= radius; ++dy) {
        for (int dx = -radius; dx <= radius; ++dx) {
            const double w = std::exp(-(dy * dy + dx * dx) * inv);
            k.weights[static_cast<std::size_t>(dy + radius) * side + (dx + radius)] = w;
            sum += w;
        }
    }
    for (double& w : k.weights) w /= sum;
    return k;
}

GaussianKernel gaussian_kernel(double sigma) {
    if (!(sigma > 0.0)) {
        throw std::invalid_argument("gaussian sigma must be positive, got " + std::to_string(sigma));
    }
    return gaussian_kernel(sigma, std::max(1, static_cast<int>(std::ceil(3.0 * sigma))));
}

GrayImage convolve(const GrayImage& image, const GaussianKernel& kernel) {
    const int h = image.height();
    const int w = image.width();
    GrayImage out(h, w);
    const int r = kernel.radius;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int dy = -r; dy <= r; ++dy) {
                const int yy = mirror_index(y + dy, h);
                for (int dx = -r; dx <= r; ++dx) {
                    acc += kernel.at(dy, dx) * image.at(yy, mirror_index(x + dx, w));
                }
            }
            out.at(y, x) = std::clamp(acc, 0.0, 1.0);
        }
    }
    return out;
}

GrayImage bilateral_filter(const GrayImage& image, double sigma_spatial, double sigma_range) {
    if (!(sigma_spatial > 0.0) || !(sigma_range > 0.0)) {
        throw std::invalid_argument("bilateral sigmas must be positive");
    }
    const int h = image.height();
    const int w = image.width();
    const int r = std::max(1, static_cast<int>(std::ceil(2.0 * sigma_spatial)));
    const double inv_s = 1.0 / (2.0 * sigma_spatial * sigma_spatial);
    const double inv_r = 1.0 / (2.0 * sigma_range * sigma_range);

    // Spatial component is separable from the data; precompute the window.
    const int side = 2 * r + 1;
    std::vector<double> spatial(static_cast<std::size_t>(side) * side);
    for (int dy = -r; dy <= r; ++dy) {
        for (int dx = -r; dx <= r; ++dx) {
            spatial[static_cast<std::size_t>(dy + r) * side + (dx + r)] =
                std::exp(-(dy * dy + dx * dx) * inv_s);
        }
    }

    GrayImage out(h, w);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double center = image.at(y, x);
            double acc = 0.0;
            double norm = 0.0;
            for (int dy = -r; dy <= r; ++dy) {
                const int yy = mirror_index(y + dy, h);
                for (int dx = -r; dx <= r; ++dx) {
                    const double v = image.at(yy, mirror_index(x + dx, w));
                    const double d = v - center;
                    const double wgt = spatial[static_cast<std::size_t>(dy + r) * side + (dx + r)] *
                                       std::exp(-d * d * inv_r);
                    acc += wgt * v;
                    norm += wgt;
                }
            }
            out.at(y, x) = std::clamp(acc / norm, 0.0, 1.0);
        }
    }
    return out;
}

ImageStats stats(const GrayImage& image) {
    if (image.empty()) {
        throw std::invalid_argument("stats of an empty image");
    }
    ImageStats s;
    s.high = image.raw()[0];
    s.low = image.raw()[0];
    double sum = 0.0;
    for (double v : image.raw()) {
        s.high = std::max(s.high, v);
        s.low = std::min(s.low, v);
        sum += v;
    }
    s.avg = sum / static_cast<double>(image.pixel_count());
    return s;
}

}  // namespace blurkit
