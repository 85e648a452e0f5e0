#pragma once

#include <cstdint>
#include <string>

#include "blurkit/image.hpp"
#include "blurkit/segment.hpp"

namespace blurkit {

// Deterministic composite test-image generator: a texture stays sharp inside
// the foreground rectangle and is Gaussian-blurred everywhere else.
struct SynthSpec {
    enum class Texture { Noise, Checker };

    int height = 64;
    int width = 64;
    Texture texture = Texture::Noise;
    int fg_x0 = 16, fg_y0 = 16;  // inclusive
    int fg_x1 = 48, fg_y1 = 48;  // exclusive
    double bg_sigma = 4.0;
    std::uint32_t seed = 0;
    int checker_period = 2;

    void validate() const;
};

struct SynthFixture {
    GrayImage image;
    SegmentationMask matte;       // hard ground truth, bits + matte values
    std::string manifest_line;    // one-line description of the generation
};

SynthFixture make_fixture(const SynthSpec& spec);

// Seeded uniform texture in [0,1); stable across platforms (does not use
// distribution adapters).
GrayImage noise_texture(int height, int width, std::uint32_t seed);
GrayImage checker_texture(int height, int width, int period, double lo = 0.15, double hi = 0.85);

}  // namespace blurkit
