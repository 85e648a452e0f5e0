#include "blurkit/dct.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace blurkit {

namespace {

// Basis row k: alpha(k) * cos(pi*k*(2j+1)/(2m)). Cached per thread; the
// per-pixel pipeline calls this with one fixed size millions of times.
const std::vector<double>& dct_basis(int m) {
    thread_local int cached_m = 0;
    thread_local std::vector<double> cached;
    if (cached_m != m) {
        cached.assign(static_cast<std::size_t>(m) * m, 0.0);
        const double a0 = std::sqrt(1.0 / m);
        const double a = std::sqrt(2.0 / m);
        for (int k = 0; k < m; ++k) {
            for (int j = 0; j < m; ++j) {
                cached[static_cast<std::size_t>(k) * m + j] =
                    (k == 0 ? a0 : a) * std::cos(std::numbers::pi * k * (2 * j + 1) / (2.0 * m));
            }
        }
        cached_m = m;
    }
    return cached;
}

}  // namespace

DctMatrix dct2(const GrayImage& patch) {
    if (patch.height() != patch.width()) {
        throw std::invalid_argument("dct2 requires a square patch, got " +
                                    std::to_string(patch.height()) + "x" +
                                    std::to_string(patch.width()));
    }
    const int m = patch.height();
    const auto& b = dct_basis(m);

    // C = B * P * B^T, evaluated as two m^3 passes.
    std::vector<double> tmp(static_cast<std::size_t>(m) * m, 0.0);
    for (int u = 0; u < m; ++u) {
        for (int y = 0; y < m; ++y) {
            double acc = 0.0;
            for (int v = 0; v < m; ++v) {
                acc += patch.at(u, v) * b[static_cast<std::size_t>(y) * m + v];
            }
            tmp[static_cast<std::size_t>(u) * m + y] = acc;
        }
    }
    DctMatrix out;
    out.m = m;
    out.coeffs.assign(static_cast<std::size_t>(m) * m, 0.0);
    for (int x = 0; x < m; ++x) {
        for (int y = 0; y < m; ++y) {
            double acc = 0.0;
            for (int u = 0; u < m; ++u) {
                acc += b[static_cast<std::size_t>(x) * m + u] * tmp[static_cast<std::size_t>(u) * m + y];
            }
            out.at(x, y) = acc;
        }
    }
    return out;
}

std::vector<double> idct2(const DctMatrix& c) {
    const int m = c.m;
    if (m < 1 || c.coeffs.size() != static_cast<std::size_t>(m) * m) {
        throw std::invalid_argument("idct2: malformed coefficient matrix");
    }
    const auto& b = dct_basis(m);
    // P = B^T * C * B
    std::vector<double> tmp(static_cast<std::size_t>(m) * m, 0.0);
    for (int x = 0; x < m; ++x) {
        for (int v = 0; v < m; ++v) {
            double acc = 0.0;
            for (int y = 0; y < m; ++y) {
                acc += c.at(x, y) * b[static_cast<std::size_t>(y) * m + v];
            }
            tmp[static_cast<std::size_t>(x) * m + v] = acc;
        }
    }
    std::vector<double> out(static_cast<std::size_t>(m) * m, 0.0);
    for (int u = 0; u < m; ++u) {
        for (int v = 0; v < m; ++v) {
            double acc = 0.0;
            for (int x = 0; x < m; ++x) {
                acc += b[static_cast<std::size_t>(x) * m + u] * tmp[static_cast<std::size_t>(x) * m + v];
            }
            out[static_cast<std::size_t>(u) * m + v] = acc;
        }
    }
    return out;
}

std::vector<double> freq_average(const DctMatrix& c) {
    const int m = c.m;
    std::vector<double> out(2 * m - 1, 0.0);
    for (int s = 0; s < 2 * m - 1; ++s) {
        const int u0 = std::max(0, s - m + 1);
        const int u1 = std::min(s, m - 1);
        double acc = 0.0;
        for (int u = u0; u <= u1; ++u) acc += c.at(u, s - u);
        out[s] = acc / (u1 - u0 + 1);
    }
    return out;
}

std::vector<double> sharpness_ratio(const std::vector<double>& c,
                                    const std::vector<double>& c_a, double guard) {
    if (c.size() != c_a.size()) {
        throw std::invalid_argument("sharpness_ratio: vector lengths differ");
    }
    std::vector<double> r(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) {
        r[i] = std::abs(c[i]) / std::max(std::abs(c_a[i]), guard);
    }
    return r;
}

DcrParams DcrParams::resolved(int n) const {
    DcrParams p = *this;
    if (p.band_low == 0) p.band_low = static_cast<int>(std::ceil(n / 3.0)) + 1;
    if (p.band_high == 0) p.band_high = static_cast<int>(std::ceil(2.0 * n / 3.0)) + 1;
    if (!(1 < p.band_low && p.band_low < p.band_high && p.band_high <= n)) {
        throw std::invalid_argument("dcr band splits out of range for vector length " +
                                    std::to_string(n));
    }
    if (!(p.weight_low >= 0 && p.weight_mid >= 0 && p.weight_high >= 0) ||
        p.weight_low + p.weight_mid + p.weight_high <= 0.0) {
        throw std::invalid_argument("dcr band weights must be non-negative with positive sum");
    }
    if (!(p.map_gain > 0.0)) throw std::invalid_argument("map gain must be positive");
    if (!(p.map_base > 1.0)) throw std::invalid_argument("map base must exceed 1");
    return p;
}

double dcr(const std::vector<double>& r, const DcrParams& params) {
    const int n = static_cast<int>(r.size());
    const DcrParams p = params.resolved(n);
    const int l = p.band_low;
    const int h = p.band_high;
    double low = 0.0, mid = 0.0, high = 0.0;
    for (int x = 1; x <= l - 1; ++x) low += r[x - 1];
    for (int x = l; x <= h - 1; ++x) mid += r[x - 1];
    for (int x = h; x <= n; ++x) high += r[x - 1];
    return p.weight_low * low / (l - 1) + p.weight_mid * mid / (h - l) +
           p.weight_high * high / (n - h + 1);
}

double map_dcr(double d, const DcrParams& params) {
    if (d < 0.0) {
        throw std::invalid_argument("map_dcr requires a non-negative value, got " +
                                    std::to_string(d));
    }
    if (!(params.map_gain > 0.0) || !(params.map_base > 1.0)) {
        throw std::invalid_argument("map_dcr: invalid mapping parameters");
    }
    const double e = std::pow(params.map_base, -params.map_gain * d);
    return (1.0 - e) / (1.0 + e);
}

std::vector<double> dct_descriptors(const DctMatrix& c, int max_order) {
    const int m = c.m;
    if (max_order < 1 || max_order > 2 * m - 1) {
        throw std::invalid_argument("descriptor order out of [1, 2m-1]: " +
                                    std::to_string(max_order));
    }
    std::vector<double> out;
    for (int x = 1; x <= m; ++x) {
        for (int y = 1; y <= m; ++y) {
            if (x + y - 1 <= max_order) out.push_back(c.at(x - 1, y - 1));
        }
    }
    return out;
}

void RefineParams::validate() const {
    if (min_window < 3 || max_window < 3 || min_window % 2 == 0 || max_window % 2 == 0 ||
        min_window > max_window) {
        throw std::invalid_argument("refine windows must be odd, >= 3, min <= max");
    }
    if (!(filter_strength > 0.0)) throw std::invalid_argument("filter strength must be positive");
    if (min_weight < 0.0 || max_weight < 0.0 || min_weight + max_weight <= 0.0) {
        throw std::invalid_argument("refine blend weights must be non-negative, not both zero");
    }
}

BlurMap refine_map(const BlurMap& raw, const DescriptorField& descriptors,
                   const RefineParams& params) {
    params.validate();
    const int h = raw.height();
    const int w = raw.width();
    if (descriptors.height != h || descriptors.width != w) {
        throw std::invalid_argument("descriptor field shape does not match map");
    }
    const int nd = descriptors.count;
    BlurMap out(h, w);
    const int radii[2] = {params.min_window / 2, params.max_window / 2};
    const double blend[2] = {params.min_weight, params.max_weight};
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const double* di = descriptors.at(y, x);
            double est[2] = {0.0, 0.0};
            for (int k = 0; k < 2; ++k) {
                const int r = radii[k];
                double acc = 0.0, norm = 0.0;
                for (int dy = -r; dy <= r; ++dy) {
                    const int yy = mirror_index(y + dy, h);
                    for (int dx = -r; dx <= r; ++dx) {
                        const int xx = mirror_index(x + dx, w);
                        const double* dj = descriptors.at(yy, xx);
                        double dist = 0.0;
                        for (int t = 0; t < nd; ++t) {
                            const double d = dj[t] - di[t];
                            dist += d * d;
                        }
                        const double wgt = std::exp(-dist / params.filter_strength);
                        acc += wgt * raw.at(yy, xx);
                        norm += wgt;
                    }
                }
                est[k] = acc / norm;
            }
            out.at(y, x) = std::clamp(
                (blend[0] * est[0] + blend[1] * est[1]) / (blend[0] + blend[1]), 0.0, 1.0);
        }
    }
    return out;
}

BlurMap double_threshold(const BlurMap& map, double th1, double th2) {
    if (!(0.0 <= th2 && th2 <= th1 && th1 <= 1.0)) {
        throw std::invalid_argument("double_threshold requires 0 <= th2 <= th1 <= 1");
    }
    BlurMap out = map;
    for (double& v : out.raw()) {
        if (v < th1 && v > th2) v = 0.0;
    }
    return out;
}

BlurMapResult blur_map_raw(const GrayImage& image, const BlurMapConfig& cfg) {
    const int m = cfg.patch;
    if (m < 2) throw std::invalid_argument("patch side must be at least 2");
    if (image.height() < m || image.width() < m) {
        throw std::invalid_argument("image smaller than the DCT patch");
    }
    const DcrParams dp = cfg.dcr.resolved(2 * m - 1);
    const GaussianKernel reblur = gaussian_kernel(cfg.sigma_blur);

    const int h = image.height();
    const int w = image.width();
    const int off = (m - 1) / 2;

    // Descriptor count for x+y-1 <= order within an m x m grid.
    int nd = 0;
    for (int x = 1; x <= m; ++x) {
        for (int y = 1; y <= m; ++y) {
            if (x + y - 1 <= cfg.descriptor_order) ++nd;
        }
    }

    BlurMapResult result;
    result.map = BlurMap(h, w);
    result.descriptors.height = h;
    result.descriptors.width = w;
    result.descriptors.count = nd;
    result.descriptors.values.assign(static_cast<std::size_t>(h) * w * nd, 0.0);

    GrayImage patch(m, m);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            for (int i = 0; i < m; ++i) {
                const int yy = mirror_index(y - off + i, h);
                for (int j = 0; j < m; ++j) {
                    patch.at(i, j) = image.at(yy, mirror_index(x - off + j, w));
                }
            }
            const DctMatrix c_mat = dct2(patch);
            const std::vector<double> c = freq_average(c_mat);
            double d;
            if (cfg.ratio_bands) {
                const DctMatrix ca_mat = dct2(convolve(patch, reblur));
                d = dcr(sharpness_ratio(c, freq_average(ca_mat), cfg.ratio_guard), dp);
            } else {
                std::vector<double> mag(c.size());
                for (std::size_t i = 0; i < c.size(); ++i) mag[i] = std::abs(c[i]);
                d = dcr(mag, dp);
            }
            result.map.at(y, x) = map_dcr(d, dp);

            const std::vector<double> desc = dct_descriptors(c_mat, cfg.descriptor_order);
            std::copy(desc.begin(), desc.end(),
                      result.descriptors.values.begin() +
                          (static_cast<std::size_t>(y) * w + x) * nd);
        }
    }
    return result;
}

BlurMap blur_map(const GrayImage& image, const BlurMapConfig& cfg) {
    BlurMapResult r = blur_map_raw(image, cfg);
    BlurMap map = std::move(r.map);
    if (cfg.refine) {
        map = refine_map(map, r.descriptors, cfg.refine_params);
    }
    if (cfg.threshold) {
        map = double_threshold(map, cfg.th1, cfg.th2);
    }
    return map;
}

}  // namespace blurkit
