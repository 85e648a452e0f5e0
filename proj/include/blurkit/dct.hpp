#pragma once

#include <vector>

#include "blurkit/image.hpp"

namespace blurkit {

// Orthonormal 2-D DCT-II coefficients of a square patch.
struct DctMatrix {
    int m = 0;
    std::vector<double> coeffs;  // m*m, row-major

    double at(int x, int y) const { return coeffs[static_cast<std::size_t>(x) * m + y]; }
    double& at(int x, int y) { return coeffs[static_cast<std::size_t>(x) * m + y]; }
};

DctMatrix dct2(const GrayImage& patch);
// Inverse transform; returns raw values (not clamped).
std::vector<double> idct2(const DctMatrix& c);

// Anti-diagonal means: out[x] = mean of coeffs(u,v) with u+v = x (0-based),
// length 2m-1.
std::vector<double> freq_average(const DctMatrix& c);

// Elementwise |c|/max(|c_a|, guard); lengths must agree.
std::vector<double> sharpness_ratio(const std::vector<double>& c,
                                    const std::vector<double>& c_a,
                                    double guard = 1e-8);

// Frequency-band weighting of a sharpness vector.
struct DcrParams {
    int band_low = 0;    // low/mid split (1-based, exclusive); 0 = ceil(n/3)+1
    int band_high = 0;   // mid/high split (1-based); 0 = ceil(2n/3)+1
    double weight_low = 1.0;
    double weight_mid = 1.0;
    double weight_high = 1.0;
    double map_gain = 0.4;                       // logistic gain b
    double map_base = 2.718281828459045235360287;  // exponent base

    // Returns a copy with the band splits fixed for vector length n; throws
    // std::invalid_argument when the configuration is unusable.
    DcrParams resolved(int n) const;
};

// Weighted sum of the three band means. params must be valid for r.size().
double dcr(const std::vector<double>& r, const DcrParams& params);

// (1 - base^(-gain*d)) / (1 + base^(-gain*d)); strictly increasing, [0,1).
double map_dcr(double d, const DcrParams& params);

// Low-order coefficients with x+y-1 <= max_order (1-based), row-major order.
std::vector<double> dct_descriptors(const DctMatrix& c, int max_order);

// Per-pixel descriptor vectors, flat layout.
struct DescriptorField {
    int height = 0;
    int width = 0;
    int count = 0;  // descriptors per pixel
    std::vector<double> values;

    const double* at(int r, int c) const {
        return values.data() + (static_cast<std::size_t>(r) * width + c) * count;
    }
};

// Non-local weighted mean over two search windows, blended.
struct RefineParams {
    int min_window = 5;
    int max_window = 11;
    double filter_strength = 10.0;  // descriptor-distance scale
    double min_weight = 0.5;        // blend weight of the small-window estimate
    double max_weight = 0.5;        // blend weight of the large-window estimate

    void validate() const;
};

BlurMap refine_map(const BlurMap& raw, const DescriptorField& descriptors,
                   const RefineParams& params);

// Keeps confident values (>= th1 or <= th2), zeroes the uncertain middle band.
BlurMap double_threshold(const BlurMap& map, double th1, double th2);

// Whole per-pixel sharpness-map pipeline.
struct BlurMapConfig {
    int patch = 8;             // DCT patch side
    double sigma_blur = 1.0;   // re-blur std-dev
    double ratio_guard = 1e-4; // division guard passed to sharpness_ratio
    bool ratio_bands = true;   // band-weight the ratio vector (false: |c| directly)
    DcrParams dcr;
    int descriptor_order = 3;  // max_order for the refine descriptor field
    bool refine = true;
    RefineParams refine_params;
    bool threshold = true;
    double th1 = 0.7;
    double th2 = 0.3;
};

BlurMap blur_map(const GrayImage& image, const BlurMapConfig& cfg);

// The raw map plus the descriptor field (reused by tests and tooling).
struct BlurMapResult {
    BlurMap map;
    DescriptorField descriptors;
};
BlurMapResult blur_map_raw(const GrayImage& image, const BlurMapConfig& cfg);

}  // namespace blurkit
