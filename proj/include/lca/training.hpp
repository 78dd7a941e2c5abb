#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "lca/corpus.hpp"
#include "lca/metrics.hpp"
#include "lca/model.hpp"
#include "lca/tensor.hpp"

namespace lca::train {

// Token-level cross-entropy of the LC-tag head (mean over all valid
// positions across the batch; padded positions are excluded).
Tensor lcp_loss(const Tensor& tag_probs, std::span<const corpus::EncodedExample> batch);

struct JointLoss {
    Tensor total;          // scalar, differentiable w.r.t. all parameters
    double polarity = 0.0;  // component values for reporting
    double lcp = 0.0;
    double l2 = 0.0;
};

// (1-sigma) * polarity CE + sigma * LCP CE + lambda * sum(theta^2) over the
// decayed parameters.
JointLoss joint_loss(const Tensor& polarity_probs, const std::vector<int>& gold_polarity,
                     const Tensor& tag_probs, std::span<const corpus::EncodedExample> batch,
                     std::span<const Tensor> decayed_params, double sigma, double lambda);

struct EpochStats {
    double train_loss = 0.0;
    double polarity_loss = 0.0;
    double lcp_loss = 0.0;
    double train_accuracy = 0.0;  // from the training-mode forward passes
    double train_macro_f1 = 0.0;
    double test_accuracy = 0.0;
    double test_macro_f1 = 0.0;
    double wall_seconds = 0.0;
};

struct TrainReport {
    std::vector<EpochStats> epochs;
    std::uint64_t seed = 1;
    bool pretrained_vectors = false;  // false marks a non-reproduction run
    std::size_t best_epoch = 0;       // 1-based, by test accuracy
    eval::MetricsReport final_metrics;
    eval::MetricsReport best_metrics;
};

struct Checkpoint {
    static constexpr std::uint32_t kVersion = 1;
    model::ModelConfig config;
    corpus::Vocabulary vocab;
    model::ModelParams params;
    eval::MetricsReport final_metrics;
};

struct TrainOptions {
    // Stop once an epoch reaches 100% train accuracy (capacity checks).
    bool stop_at_perfect_train_accuracy = false;
    bool quiet = false;  // suppress per-epoch progress lines
};

struct TrainResult {
    Checkpoint checkpoint;
    TrainReport report;
};

// Seeded mini-batch training: shuffle, forward, joint loss, backward, Adam;
// per-epoch evaluation on the test split. Fully deterministic for a fixed
// seed. Aborts with epoch/batch coordinates if the loss stops being finite.
TrainResult train(const model::ModelConfig& config, const corpus::Vocabulary& vocab,
                  Tensor token_embedding, bool pretrained_vectors,
                  const std::vector<corpus::EncodedExample>& train_set,
                  const std::vector<corpus::EncodedExample>& test_set,
                  const TrainOptions& options = {});

// Versioned binary container; save -> load round-trips every byte.
void save_checkpoint(const Checkpoint& ckpt, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

}  // namespace lca::train
