#include "blurkit/segment.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace blurkit {

std::size_t SegmentationMask::ones() const {
    std::size_t n = 0;
    for (auto b : bits) n += b != 0;
    return n;
}

SegmentationMask mask_from_image(const GrayImage& image, double threshold) {
    SegmentationMask m;
    m.height = image.height();
    m.width = image.width();
    m.bits.resize(image.pixel_count());
    for (std::size_t i = 0; i < m.bits.size(); ++i) {
        m.bits[i] = image.raw()[i] >= threshold ? 1 : 0;
    }
    return m;
}

GrayImage mask_to_image(const SegmentationMask& mask) {
    std::vector<double> data(mask.bits.size());
    for (std::size_t i = 0; i < data.size(); ++i) data[i] = mask.bits[i] ? 1.0 : 0.0;
    return GrayImage(mask.height, mask.width, std::move(data));
}

ComponentLabels connected_components(const SegmentationMask& binary) {
    const int h = binary.height;
    const int w = binary.width;
    ComponentLabels out;
    out.height = h;
    out.width = w;
    out.labels.assign(binary.bits.size(), 0);
    out.count = 0;

    std::vector<std::size_t> stack;
    for (int y0 = 0; y0 < h; ++y0) {
        for (int x0 = 0; x0 < w; ++x0) {
            const std::size_t start = static_cast<std::size_t>(y0) * w + x0;
            if (!binary.bits[start] || out.labels[start] != 0) continue;
            const int label = ++out.count;
            out.labels[start] = label;
            stack.assign(1, start);
            while (!stack.empty()) {
                const std::size_t cur = stack.back();
                stack.pop_back();
                const int cy = static_cast<int>(cur / w);
                const int cx = static_cast<int>(cur % w);
                for (int dy = -1; dy <= 1; ++dy) {
                    for (int dx = -1; dx <= 1; ++dx) {
                        const int ny = cy + dy;
                        const int nx = cx + dx;
                        if (ny < 0 || ny >= h || nx < 0 || nx >= w) continue;
                        const std::size_t ni = static_cast<std::size_t>(ny) * w + nx;
                        if (binary.bits[ni] && out.labels[ni] == 0) {
                            out.labels[ni] = label;
                            stack.push_back(ni);
                        }
                    }
                }
            }
        }
    }
    return out;
}

GrayImage compose(const GrayImage& fg, const GrayImage& bg, const GrayImage& chi) {
    if (fg.height() != bg.height() || fg.width() != bg.width() ||
        fg.height() != chi.height() || fg.width() != chi.width()) {
        throw std::invalid_argument("compose: shape mismatch");
    }
    std::vector<double> data(fg.pixel_count());
    for (std::size_t i = 0; i < data.size(); ++i) {
        const double a = chi.raw()[i];
        data[i] = std::clamp(a * fg.raw()[i] + (1.0 - a) * bg.raw()[i], 0.0, 1.0);
    }
    return GrayImage(fg.height(), fg.width(), std::move(data));
}

PipelineConfig PipelineConfig::resolved(int height, int width) const {
    PipelineConfig c = *this;
    if (c.dct.th2 < 0.0) c.dct.th2 = 0.4 * c.dct.th1;
    if (c.wave_floor < 0.0) c.wave_floor = c.dct.th1;
    if (c.area_threshold < 0) {
        c.area_threshold =
            static_cast<int>(0.001 * static_cast<double>(height) * static_cast<double>(width));
    }
    return c;
}

SegmentationMask classify_pixels(const FireMap& fire, const GrayImage& stimulus,
                                 const PipelineConfig& cfg) {
    if (fire.height != stimulus.height() || fire.width != stimulus.width()) {
        throw std::invalid_argument("classify_pixels: fire map and stimulus shapes differ");
    }
    const PipelineConfig c = cfg.resolved(fire.height, fire.width);
    const std::size_t n = fire.first_fire.size();

    // Mean stimulus per firing wave, ordered by iteration.
    std::map<int, std::pair<double, std::size_t>> waves;  // iter -> (sum, count)
    for (std::size_t i = 0; i < n; ++i) {
        const int it = fire.first_fire[i];
        if (it > 0) {
            auto& acc = waves[it];
            acc.first += stimulus.raw()[i];
            acc.second += 1;
        }
    }
    const double max_stim = stimulus.empty() ? 0.0 : stats(stimulus).high;

    std::vector<std::uint8_t> candidate_wave(
        static_cast<std::size_t>(waves.empty() ? 0 : waves.rbegin()->first) + 1, 0);
    int accepted = 0;
    for (const auto& [iter, acc] : waves) {
        const double mean = acc.first / static_cast<double>(acc.second);
        if (mean >= c.wave_ratio * max_stim && mean >= c.wave_floor &&
            (c.max_waves == 0 || accepted < c.max_waves)) {
            candidate_wave[iter] = 1;
            ++accepted;
        } else {
            break;  // waves are taken as an earliest-first prefix
        }
    }

    SegmentationMask candidates;
    candidates.height = fire.height;
    candidates.width = fire.width;
    candidates.bits.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        const int it = fire.first_fire[i];
        if (it > 0 && it < static_cast<int>(candidate_wave.size()) && candidate_wave[it]) {
            candidates.bits[i] = 1;
        }
    }

    const ComponentLabels labels = connected_components(candidates);
    std::vector<std::size_t> sizes(static_cast<std::size_t>(labels.count) + 1, 0);
    for (int lb : labels.labels) ++sizes[lb];

    SegmentationMask out;
    out.height = fire.height;
    out.width = fire.width;
    out.bits.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        const int lb = labels.labels[i];
        if (lb > 0 && sizes[lb] > static_cast<std::size_t>(c.area_threshold)) {
            out.bits[i] = 1;
        }
    }
    return out;
}

SegmentationResult segment_debug(const GrayImage& image, const PipelineConfig& cfg,
                                 std::ostream* trace) {
    const PipelineConfig c = cfg.resolved(image.height(), image.width());

    GrayImage work = image;
    if (c.bilateral) {
        work = bilateral_filter(work, c.bilateral_sigma_spatial, c.bilateral_sigma_range);
    }

    SegmentationResult result;
    result.map = blur_map(work, c.dct);

    // The sharpness map is the PCNN stimulus: weak pixels barely fire and
    // never make it into the early waves.
    PcnnParams pcnn = c.pcnn;
    if (c.pcnn_adapt) {
        const PcnnParams adapted = adapt_params(result.map);
        pcnn.theta_init = adapted.theta_init;
        pcnn.theta_floor = adapted.theta_floor;
    }
    if (pcnn.theta_init <= 0.0) {
        // All-zero stimulus: nothing can fire, keep init valid.
        pcnn.theta_init = 1.0;
    }
    result.fire = pcnn_run(result.map, pcnn, trace);
    result.mask = classify_pixels(result.fire, result.map, c);
    return result;
}

SegmentationMask segment(const GrayImage& image, const PipelineConfig& cfg) {
    return segment_debug(image, cfg, nullptr).mask;
}

}  // namespace blurkit
