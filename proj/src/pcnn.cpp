#include "blurkit/pcnn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace blurkit {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

std::array<double, 9> default_weights() {
    return {0.5, 1.0, 0.5, 1.0, 0.0, 1.0, 0.5, 1.0, 0.5};
}

void PcnnParams::validate() const {
    if (!(beta >= 0.0 && beta < 1.0)) {
        throw std::invalid_argument("pcnn beta must lie in [0, 1)");
    }
    if (!(link_gain > 0.0) || !(theta_gain > 0.0)) {
        throw std::invalid_argument("pcnn gains must be positive");
    }
    if (!(link_decay > 0.0) || !(theta_decay > 0.0)) {
        throw std::invalid_argument("pcnn decays must be positive");
    }
    if (max_iters < 1) throw std::invalid_argument("pcnn max_iters must be at least 1");
    if (!(theta_init >= 0.0) || !(theta_floor >= 0.0)) {
        throw std::invalid_argument("pcnn thresholds must be non-negative");
    }
}

PcnnParams adapt_params(const GrayImage& stimulus) {
    if (stimulus.empty()) throw std::invalid_argument("adapt_params: empty stimulus");
    PcnnParams p;
    p.theta_init = stats(stimulus).high;

    // 256-bin histogram, coverage accumulated from the top.
    std::array<std::size_t, 256> hist{};
    for (double v : stimulus.raw()) {
        int bin = static_cast<int>(v * 255.0);
        bin = std::clamp(bin, 0, 255);
        ++hist[bin];
    }
    const double target = 0.93 * static_cast<double>(stimulus.pixel_count());
    std::size_t acc = 0;
    int level = 0;
    for (int g = 255; g >= 0; --g) {
        acc += hist[g];
        if (static_cast<double>(acc) >= target) {
            level = g;
            break;
        }
    }
    p.theta_floor = level / 255.0;
    return p;
}

PcnnState pcnn_init(const GrayImage& stimulus, const PcnnParams& params) {
    params.validate();
    PcnnState s;
    s.height = stimulus.height();
    s.width = stimulus.width();
    const std::size_t n = stimulus.pixel_count();
    s.feed.assign(stimulus.raw().begin(), stimulus.raw().end());
    s.link.assign(n, 0.0);
    s.activity.assign(n, 0.0);
    s.theta.assign(n, params.theta_init);
    s.output.assign(n, 0);
    s.fired.assign(n, 0);
    s.iteration = 0;
    return s;
}

void pcnn_step(PcnnState& state, const PcnnParams& params) {
    if (state.iteration >= params.max_iters) {
        throw std::invalid_argument("pcnn_step past max_iters");
    }
    const int h = state.height;
    const int w = state.width;
    const double link_keep = std::exp(-params.link_decay);
    const double theta_keep = std::exp(-params.theta_decay);
    // One quantization step of slack so a stimulus exactly at the floor
    // level can still satisfy the strict fire test.
    const double floor_level = std::max(0.0, params.theta_floor - 1.0 / 255.0);

    std::vector<std::uint8_t> prev_output = state.output;

    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const std::size_t i = static_cast<std::size_t>(y) * w + x;
            double pulse_sum = 0.0;
            for (int dy = -1; dy <= 1; ++dy) {
                const int yy = mirror_index(y + dy, h);
                for (int dx = -1; dx <= 1; ++dx) {
                    const int xx = mirror_index(x + dx, w);
                    pulse_sum += params.weights[static_cast<std::size_t>(dy + 1) * 3 + (dx + 1)] *
                                 prev_output[static_cast<std::size_t>(yy) * w + xx];
                }
            }
            state.link[i] = params.link_gain * pulse_sum + link_keep * state.link[i];
            state.activity[i] = state.feed[i] * (1.0 + params.beta * state.link[i]);
            if (state.fired[i]) {
                state.theta[i] = kInf;
                state.output[i] = 0;
            } else {
                state.theta[i] = std::max(
                    params.theta_gain * prev_output[i] + theta_keep * state.theta[i], floor_level);
                state.output[i] = state.activity[i] > state.theta[i] ? 1 : 0;
            }
        }
    }
    // Pulsed neurons are retired: fire once, then the sentinel keeps them out.
    for (std::size_t i = 0; i < state.output.size(); ++i) {
        if (state.output[i]) {
            state.fired[i] = 1;
            state.theta[i] = kInf;
        }
    }
    ++state.iteration;
}

FireMap pcnn_run(const GrayImage& stimulus, const PcnnParams& params, std::ostream* trace) {
    PcnnState s = pcnn_init(stimulus, params);
    FireMap fm;
    fm.height = s.height;
    fm.width = s.width;
    fm.first_fire.assign(stimulus.pixel_count(), 0);

    for (int n = 1; n <= params.max_iters; ++n) {
        pcnn_step(s, params);
        std::size_t count = 0;
        for (std::size_t i = 0; i < s.output.size(); ++i) {
            if (s.output[i]) {
                fm.first_fire[i] = n;
                ++count;
            }
        }
        if (trace) (*trace) << "iter " << n << ": " << count << "\n";
        if (std::all_of(s.fired.begin(), s.fired.end(), [](std::uint8_t f) { return f != 0; })) {
            break;
        }
    }
    return fm;
}

}  // namespace blurkit
