#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "blurkit/image.hpp"

namespace blurkit {

// 3x3 synaptic weights: 4-neighbors 1, diagonals 0.5, center 0.
std::array<double, 9> default_weights();

struct PcnnParams {
    double beta = 0.2;        // linking strength, in [0, 1)
    double link_gain = 1.0;   // amplitude of the linking input
    double link_decay = 0.7;  // linking leak rate
    double theta_gain = 20.0; // threshold kick after a pulse
    double theta_decay = 0.2; // threshold leak rate
    std::array<double, 9> weights = default_weights();
    double theta_init = 1.0;  // initial dynamic threshold
    double theta_floor = 0.0; // threshold never decays below this level
    int max_iters = 50;

    void validate() const;
};

// Derives theta_init = max intensity and theta_floor from the gray-level
// histogram: the largest 1/255 level whose top-cumulative coverage reaches
// 93% of all pixels. Remaining fields keep their defaults.
PcnnParams adapt_params(const GrayImage& stimulus);

struct PcnnState {
    int height = 0;
    int width = 0;
    std::vector<double> feed;     // external stimulus, fixed
    std::vector<double> link;     // neighbor-coupled input
    std::vector<double> activity; // internal activity U
    std::vector<double> theta;    // dynamic threshold (+inf once fired)
    std::vector<std::uint8_t> output;  // pulse this iteration
    std::vector<std::uint8_t> fired;   // has pulsed at least once
    int iteration = 0;
};

PcnnState pcnn_init(const GrayImage& stimulus, const PcnnParams& params);

// One synchronous update; all neurons read iteration-n values.
void pcnn_step(PcnnState& state, const PcnnParams& params);

// First-fire iteration per pixel; 0 = never fired.
struct FireMap {
    int height = 0;
    int width = 0;
    std::vector<int> first_fire;

    int at(int r, int c) const { return first_fire[static_cast<std::size_t>(r) * width + c]; }
};

// Steps until every neuron fired or max_iters is reached. When trace is
// given, emits one "iter <n>: <count>" line per iteration.
FireMap pcnn_run(const GrayImage& stimulus, const PcnnParams& params,
                 std::ostream* trace = nullptr);

}  // namespace blurkit
