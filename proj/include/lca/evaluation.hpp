#pragma once

#include <span>
#include <string>
#include <vector>

#include "lca/metrics.hpp"
#include "lca/training.hpp"

namespace lca::eval {

// Encodes a raw split with the checkpoint's vocabulary and alpha, then runs
// the eval-mode forward.
MetricsReport evaluate_checkpoint(const train::Checkpoint& ckpt,
                                  const std::vector<corpus::RawExample>& test);

enum class Variant { full, no_lce, no_lcp, no_cdm, plain };

const char* variant_name(Variant v);
std::optional<Variant> variant_from_name(const std::string& name);
model::ModelConfig apply_variant(model::ModelConfig config, Variant v);

struct AblationRow {
    Variant variant;
    MetricsReport metrics;
};

// Trains one model per variant with the shared seed and identical data order.
std::vector<AblationRow> run_ablation(const model::ModelConfig& base,
                                      const corpus::Vocabulary& vocab, const Tensor& embedding,
                                      bool pretrained,
                                      const std::vector<corpus::EncodedExample>& train_set,
                                      const std::vector<corpus::EncodedExample>& test_set,
                                      std::span<const Variant> variants);

struct SweepPoint {
    double sigma = 0.0;
    double accuracy = 0.0;
    double macro_f1 = 0.0;
};

// One full training per sigma, shared seed.
std::vector<SweepPoint> sigma_sweep(const model::ModelConfig& base,
                                    const corpus::Vocabulary& vocab, const Tensor& embedding,
                                    bool pretrained,
                                    const std::vector<corpus::EncodedExample>& train_set,
                                    const std::vector<corpus::EncodedExample>& test_set,
                                    std::span<const double> sigmas);

// Writes `token,gold_tag,pred_tag,attention` rows for one sentence/target,
// one row per valid token.
void export_attention(const train::Checkpoint& ckpt, const std::string& sentence,
                      const std::string& target, const std::string& path);

}  // namespace lca::eval
