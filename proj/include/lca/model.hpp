#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "lca/adam.hpp"
#include "lca/corpus.hpp"
#include "lca/tensor.hpp"

namespace lca::model {

enum class LceMode { dot, additive, off };
enum class Pooling { mean, first };
enum class Mode { train, eval };

const char* lce_mode_name(LceMode m);
std::optional<LceMode> lce_mode_from_name(const std::string& name);
const char* pooling_name(Pooling p);
std::optional<Pooling> pooling_from_name(const std::string& name);

// Every knob of the classifier. Defaults are the full-size configuration;
// alpha is dataset-dependent (laptop 5, restaurant 3, twitter 5) and set by
// whoever assembles the run.
struct ModelConfig {
    std::size_t d_h = 300;
    std::size_t heads = 30;
    double dropout = 0.1;
    std::size_t pad_len = 80;
    int alpha = 5;
    double sigma = 0.5;
    double lambda = 1e-4;
    double learning_rate = 2e-3;
    std::size_t batch_size = 32;
    std::size_t epochs = 10;
    LceMode lce_mode = LceMode::dot;
    bool lcp_enabled = true;
    bool cdm_enabled = true;
    Pooling pooling = Pooling::mean;
    std::uint64_t seed = 1;

    std::size_t head_dim() const { return d_h / heads; }
    void validate() const;  // throws ConfigError
};

struct EncoderParams {
    Tensor wq, wk, wv, wo;  // all d_h x d_h; per-head blocks are column slices
};

struct ModelParams {
    Tensor token_embedding;  // |V| x d_h, frozen (requires_grad = false)
    Tensor lce_embedding;    // 2 x d_h, one row per LC-tag value
    EncoderParams global_encoder;
    EncoderParams local_encoder;
    Tensor fuse_w, fuse_b;  // 2*d_h x d_h, 1 x d_h
    Tensor tag_w, tag_b;    // d_h x 2,   1 x 2
    Tensor pol_w, pol_b;    // d_h x 3,   1 x 3

    // Xavier on projections, zeros on biases; the LC-tag embedding starts at
    // the neutral element of its injection mode (ones for dot, zeros for
    // additive).
    static ModelParams init(const ModelConfig& config, Tensor token_embedding,
                            std::mt19937_64& rng);

    NamedTensors named() const;  // fixed order, includes the frozen embedding
    // Parameters the optimizer updates for this configuration (the LC-tag
    // embedding only participates when an LCE mode is on).
    NamedTensors trainable(const ModelConfig& config) const;
    // Non-bias trainable parameters subject to L2.
    std::vector<Tensor> decayed(const ModelConfig& config) const;
    std::size_t parameter_count() const;
    std::size_t trainable_count(const ModelConfig& config) const;
};

// Embedding lookup for one padded id sequence; dropout applies in train mode.
Tensor embed(const std::vector<int>& ids, const Tensor& table, double dropout_rate,
             std::mt19937_64* rng, Mode mode);

// Multi-head self-attention with tanh output activation. Key positions at or
// beyond valid_len are excluded from every softmax. mean_attention, when
// non-null, receives the head-averaged attention matrix (rows x rows).
Tensor mhsa(const Tensor& x, const EncoderParams& enc, std::size_t heads, std::size_t valid_len,
            std::vector<double>* mean_attention = nullptr);

// Position-wise product of embedded LC-tags with the global features.
Tensor lce_dot(const std::vector<int>& tags, const Tensor& lce_embedding,
               const Tensor& global_features);
// Input-embedding variant: adds the tag embedding row to each position.
Tensor lce_additive(const Tensor& embedded, const std::vector<int>& tags,
                    const Tensor& lce_embedding);

struct ForwardResult {
    Tensor polarity_probs;  // batch x 3
    Tensor tag_probs;       // batch x pad_len x 2
    // head-averaged global attention per example (pad_len * pad_len,
    // row-major); filled only when requested
    std::vector<std::vector<double>> attention;
};

ForwardResult forward(std::span<const corpus::EncodedExample> batch, const ModelParams& params,
                      const ModelConfig& config, Mode mode, std::mt19937_64* rng = nullptr,
                      bool want_attention = false);

struct Prediction {
    corpus::Polarity polarity = corpus::Polarity::neutral;
    std::vector<std::string> tokens;       // valid tokens after encoding
    std::vector<int> predicted_tags;       // argmax LC-tag per valid token
    std::vector<int> gold_tags;            // rule-derived tags for config.alpha
    std::vector<double> attention_received;  // mean over heads and valid queries
};

// tokenize -> encode -> eval-mode forward for one sentence/target pair. The
// target must occur in the sentence (first occurrence is used).
Prediction predict(const ModelParams& params, const ModelConfig& config,
                   const corpus::Vocabulary& vocab, const std::string& sentence,
                   const std::string& target);

}  // namespace lca::model
