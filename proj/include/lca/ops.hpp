#pragma once

#include <cstddef>
#include <limits>
#include <random>
#include <span>
#include <vector>

#include "lca/tensor.hpp"

namespace lca {

inline constexpr std::size_t kAllRows = std::numeric_limits<std::size_t>::max();

// ---- differentiable ops ------------------------------------------------
// Each op validates shapes, computes the forward value, and (while the tape
// is recording and any input requires a gradient) appends one backward node.

Tensor matmul(const Tensor& a, const Tensor& b);
Tensor transpose(const Tensor& a);

Tensor add(const Tensor& a, const Tensor& b);
// a (m x n) plus a row vector (1 x n), broadcast over rows.
Tensor add_rowvec(const Tensor& a, const Tensor& row);
Tensor mul(const Tensor& a, const Tensor& b);  // Hadamard
Tensor scale(const Tensor& a, double factor);
Tensor tanh_op(const Tensor& a);
Tensor sum(const Tensor& a);  // scalar

// Softmax over the last axis; numerically stable via max subtraction.
Tensor softmax(const Tensor& a);
// Rank-2 softmax over columns [0, valid_cols) per row; remaining columns are
// exactly zero and receive exactly zero gradient.
Tensor masked_softmax(const Tensor& a, std::size_t valid_cols);

// softmax(q k^T / sqrt(d_k)) v with optional key masking. Keys at positions
// >= valid_keys get zero attention. When save_attn is non-null the full
// attention matrix (q.rows x k.rows, row-major) is copied out.
Tensor scaled_dot_attention(const Tensor& q, const Tensor& k, const Tensor& v,
                            std::size_t valid_keys = kAllRows,
                            std::vector<double>* save_attn = nullptr);

Tensor slice_cols(const Tensor& a, std::size_t start, std::size_t len);
Tensor slice_rows(const Tensor& a, std::size_t start, std::size_t len);
Tensor concat_cols(std::span<const Tensor> parts);
Tensor concat_rows(std::span<const Tensor> parts);
Tensor reshape(const Tensor& a, Shape shape);

// Row gather: out[i] = table[ids[i]]. Gradients scatter-add into the table.
Tensor rows_lookup(const Tensor& table, const std::vector<int>& ids);

// Mean over rows [0, valid) -> 1 x n.
Tensor mean_rows_masked(const Tensor& a, std::size_t valid);

// Inverted dropout: keep with probability 1-p and scale by 1/(1-p); identity
// when active is false or p == 0.
Tensor dropout(const Tensor& a, double p, std::mt19937_64& rng, bool active);

// Mean over rows with positive weight of -log(probs[i, gold[i]]). weights
// empty means all-ones. The divisor is the sum of weights.
Tensor cross_entropy(const Tensor& probs, const std::vector<int>& gold,
                     const std::vector<double>& weights = {});

// lambda * sum over params of sum(theta^2); backward contributes exactly
// 2*lambda*theta to each parameter.
Tensor l2_penalty(std::span<const Tensor> params, double lambda);

}  // namespace lca
