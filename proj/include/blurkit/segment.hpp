#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "blurkit/dct.hpp"
#include "blurkit/image.hpp"
#include "blurkit/pcnn.hpp"

namespace blurkit {

// Binary in-focus decision per pixel (1 = in focus). When the mask was
// synthesized, the originating matte travels along.
struct SegmentationMask {
    int height = 0;
    int width = 0;
    std::vector<std::uint8_t> bits;
    std::optional<std::vector<double>> matte;

    bool at(int r, int c) const { return bits[static_cast<std::size_t>(r) * width + c] != 0; }
    std::size_t ones() const;
};

SegmentationMask mask_from_image(const GrayImage& image, double threshold = 0.5);
GrayImage mask_to_image(const SegmentationMask& mask);

struct ComponentLabels {
    int height = 0;
    int width = 0;
    std::vector<int> labels;  // 0 = background
    int count = 0;
};

// 8-connected labeling; labels follow row-major first-pixel order.
ComponentLabels connected_components(const SegmentationMask& binary);

// out = chi*fg + (1-chi)*bg, elementwise.
GrayImage compose(const GrayImage& fg, const GrayImage& bg, const GrayImage& chi);

struct PipelineConfig {
    BlurMapConfig dct;
    PcnnParams pcnn;
    bool pcnn_adapt = true;   // derive theta_init/theta_floor from the stimulus
    bool bilateral = false;
    double bilateral_sigma_spatial = 2.0;
    double bilateral_sigma_range = 0.1;
    double wave_ratio = 0.5;  // candidate waves need mean stimulus >= ratio*max
    double wave_floor = -1.0; // absolute mean-stimulus floor; <0 -> dct.th1
    int max_waves = 0;        // 0 = no cap on accepted waves
    int area_threshold = -1;  // components kept when size > T; <0 -> 0.1% of pixels

    // Copy with the coupled defaults (th2 = 0.4*th1, wave floor, area T) filled in.
    PipelineConfig resolved(int height, int width) const;
};

// Candidate pixels = earliest firing waves whose mean stimulus stays strong;
// connected components below the area threshold are dropped.
SegmentationMask classify_pixels(const FireMap& fire, const GrayImage& stimulus,
                                 const PipelineConfig& cfg);

// Full pipeline: stats/adaptation, optional bilateral prefilter, sharpness
// map, PCNN over the map, pixel classification.
SegmentationMask segment(const GrayImage& image, const PipelineConfig& cfg);

// Pipeline with intermediates exposed for tooling.
struct SegmentationResult {
    SegmentationMask mask;
    BlurMap map;
    FireMap fire;
};
SegmentationResult segment_debug(const GrayImage& image, const PipelineConfig& cfg,
                                 std::ostream* trace = nullptr);

}  // namespace blurkit
