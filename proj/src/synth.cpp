#include "blurkit/synth.hpp"

#include <random>
#include <sstream>
#include <stdexcept>

namespace blurkit {

void SynthSpec::validate() const {
    if (height < 1 || width < 1) throw std::invalid_argument("synth: degenerate image size");
    if (!(fg_x0 < fg_x1 && fg_y0 < fg_y1) || fg_x0 < 0 || fg_y0 < 0 || fg_x1 > width ||
        fg_y1 > height) {
        throw std::invalid_argument("synth: degenerate foreground rectangle");
    }
    if (!(bg_sigma > 0.0)) throw std::invalid_argument("synth: background sigma must be positive");
    if (texture == Texture::Checker && checker_period < 1) {
        throw std::invalid_argument("synth: checker period must be at least 1");
    }
}

GrayImage noise_texture(int height, int width, std::uint32_t seed) {
    std::mt19937 gen(seed);
    std::vector<double> data(static_cast<std::size_t>(height) * width);
    for (double& v : data) {
        // Top 24 bits scaled; identical output on every platform.
        v = static_cast<double>(gen() >> 8) * (1.0 / 16777216.0);
    }
    return GrayImage(height, width, std::move(data));
}

GrayImage checker_texture(int height, int width, int period, double lo, double hi) {
    GrayImage img(height, width);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            img.at(y, x) = ((y / period + x / period) % 2 == 0) ? lo : hi;
        }
    }
    return img;
}

SynthFixture make_fixture(const SynthSpec& spec) {
    spec.validate();
    const GrayImage texture =
        spec.texture == SynthSpec::Texture::Noise
            ? noise_texture(spec.height, spec.width, spec.seed)
            : checker_texture(spec.height, spec.width, spec.checker_period);
    const GrayImage background = convolve(texture, gaussian_kernel(spec.bg_sigma));

    GrayImage chi(spec.height, spec.width, 0.0);
    for (int y = spec.fg_y0; y < spec.fg_y1; ++y) {
        for (int x = spec.fg_x0; x < spec.fg_x1; ++x) {
            chi.at(y, x) = 1.0;
        }
    }

    SynthFixture fx;
    fx.image = compose(texture, background, chi);
    fx.matte = mask_from_image(chi, 0.5);
    fx.matte.matte = std::vector<double>(chi.raw());

    std::ostringstream line;
    line << "size=" << spec.width << "x" << spec.height
         << " texture=" << (spec.texture == SynthSpec::Texture::Noise ? "noise" : "checker")
         << " rect=" << spec.fg_x0 << "," << spec.fg_y0 << "," << spec.fg_x1 << "," << spec.fg_y1
         << " bg_sigma=" << spec.bg_sigma << " seed=" << spec.seed;
    if (spec.texture == SynthSpec::Texture::Checker) {
        line << " checker_period=" << spec.checker_period;
    }
    fx.manifest_line = line.str();
    return fx;
}

}  // namespace blurkit
