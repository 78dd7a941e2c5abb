#pragma once

#include <cstddef>
#include <vector>

#include "lca/tensor.hpp"

namespace lca::lctx {

// Half-open token-index interval of a target span.
struct Span {
    std::size_t begin = 0;
    std::size_t end = 0;
    std::size_t length() const { return end - begin; }
};

// Binary local-context tags for one padded sentence; padded positions are 0.
struct LcTagVector {
    std::vector<int> tags;  // length pad_len, values in {0,1}
    int alpha = 0;
};

// 0/1 mask of shape pad_len x d_h; row i is all-ones iff tag i is 1.
struct MaskMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;  // row-major
};

// Semantic relative distance |i - p_t| - floor(m/2) of position i from the
// target span; p_t is the mean target position (fractional for even-length
// targets), m the span length. Negative inside the target.
double srd(std::size_t position, Span target);

// tag_i = 1 iff srd(i) <= alpha for i < valid_len; padded positions get 0.
LcTagVector lc_tags(std::size_t valid_len, Span target, int alpha, std::size_t pad_len);

MaskMatrix cdm_mask(const LcTagVector& tags, std::size_t d_h);

// Element-wise product with the mask; non-local rows become exactly zero and
// receive exactly zero gradient, local rows pass through bit-identically.
Tensor apply_mask(const Tensor& global_features, const MaskMatrix& mask);

}  // namespace lca::lctx
