#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "lca/corpus.hpp"
#include "lca/model.hpp"

namespace lca::eval {

struct MetricsReport {
    double accuracy = 0.0;
    double macro_f1 = 0.0;
    double lc_tag_accuracy = 0.0;
    std::array<double, 3> precision{};
    std::array<double, 3> recall{};
    std::array<double, 3> f1{};
    std::array<std::array<std::size_t, 3>, 3> confusion{};  // [gold][pred]
    std::size_t count = 0;
};

// Fraction of exact matches.
double accuracy(std::span<const int> predicted, std::span<const int> gold);

// Unweighted mean of per-class F1 over the three polarity classes, with the
// 0/0 -> 0 convention for degenerate classes.
double macro_f1(std::span<const int> predicted, std::span<const int> gold);

// Eval-mode forward over the whole split; deterministic. LC-tag accuracy is
// measured against each example's rule-derived tags.
MetricsReport evaluate(const model::ModelParams& params, const model::ModelConfig& config,
                       std::span<const corpus::EncodedExample> test);

}  // namespace lca::eval
