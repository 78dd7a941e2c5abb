#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "lca/tensor.hpp"

namespace lca {

struct AdamOptions {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

// Per-parameter first/second moment estimates, keyed by parameter name.
// Moment buffers are created lazily on the first step and stay
// shape-congruent with their parameters afterwards.
struct AdamState {
    std::size_t step = 0;
    std::map<std::string, std::vector<double>> first_moment;
    std::map<std::string, std::vector<double>> second_moment;
};

using NamedTensors = std::vector<std::pair<std::string, Tensor>>;

// One bias-corrected Adam update over every named parameter. Each parameter
// must carry a populated gradient (a parameter whose gradient was never
// written is reported by name); gradients are cleared after the update.
void adam_step(NamedTensors& params, AdamState& state, double lr, const AdamOptions& opt = {});

}  // namespace lca
