#include "lca/model.hpp"

#include <algorithm>
#include <cmath>

#include "lca/errors.hpp"
#include "lca/local_context.hpp"
#include "lca/ops.hpp"

namespace lca::model {

const char* lce_mode_name(LceMode m) {
    switch (m) {
        case LceMode::dot: return "dot";
        case LceMode::additive: return "additive";
        case LceMode::off: return "off";
    }
    return "?";
}

std::optional<LceMode> lce_mode_from_name(const std::string& name) {
    if (name == "dot") return LceMode::dot;
    if (name == "additive") return LceMode::additive;
    if (name == "off") return LceMode::off;
    return std::nullopt;
}

const char* pooling_name(Pooling p) { return p == Pooling::mean ? "mean" : "first"; }

std::optional<Pooling> pooling_from_name(const std::string& name) {
    if (name == "mean") return Pooling::mean;
    if (name == "first") return Pooling::first;
    return std::nullopt;
}

void ModelConfig::validate() const {
    if (d_h == 0 || heads == 0 || d_h % heads != 0) {
        throw ConfigError("d_h (" + std::to_string(d_h) + ") must be a positive multiple of heads (" +
                          std::to_string(heads) + ")");
    }
    if (sigma < 0.0 || sigma > 1.0) {
        throw ConfigError("sigma must be in [0, 1], got " + std::to_string(sigma));
    }
    if (alpha < 0) throw ConfigError("alpha must be >= 0, got " + std::to_string(alpha));
    if (dropout < 0.0 || dropout >= 1.0) {
        throw ConfigError("dropout must be in [0, 1), got " + std::to_string(dropout));
    }
    if (lambda < 0.0) throw ConfigError("lambda must be >= 0, got " + std::to_string(lambda));
    if (pad_len == 0) throw ConfigError("pad_len must be positive");
    if (batch_size == 0) throw ConfigError("batch_size must be positive");
    if (learning_rate <= 0.0) throw ConfigError("learning_rate must be positive");
}

ModelParams ModelParams::init(const ModelConfig& config, Tensor token_embedding,
                              std::mt19937_64& rng) {
    config.validate();
    if (token_embedding.rank() != 2 || token_embedding.cols() != config.d_h) {
        throw ShapeError("token embedding " + shape_str(token_embedding.shape()) +
                         " does not match d_h " + std::to_string(config.d_h));
    }
    ModelParams p;
    p.token_embedding = std::move(token_embedding);
    p.token_embedding.set_requires_grad(false);  // frozen

    const std::size_t d = config.d_h;
    p.lce_embedding = config.lce_mode == LceMode::additive ? Tensor::zeros({2, d}, true)
                                                           : Tensor::full({2, d}, 1.0, true);
    for (EncoderParams* enc : {&p.global_encoder, &p.local_encoder}) {
        enc->wq = Tensor::xavier(d, d, rng);
        enc->wk = Tensor::xavier(d, d, rng);
        enc->wv = Tensor::xavier(d, d, rng);
        enc->wo = Tensor::xavier(d, d, rng);
    }
    p.fuse_w = Tensor::xavier(2 * d, d, rng);
    p.fuse_b = Tensor::zeros({1, d}, true);
    p.tag_w = Tensor::xavier(d, 2, rng);
    p.tag_b = Tensor::zeros({1, 2}, true);
    p.pol_w = Tensor::xavier(d, 3, rng);
    p.pol_b = Tensor::zeros({1, 3}, true);
    return p;
}

NamedTensors ModelParams::named() const {
    return {
        {"embed.tokens", token_embedding},
        {"embed.lce", lce_embedding},
        {"global.wq", global_encoder.wq},
        {"global.wk", global_encoder.wk},
        {"global.wv", global_encoder.wv},
        {"global.wo", global_encoder.wo},
        {"local.wq", local_encoder.wq},
        {"local.wk", local_encoder.wk},
        {"local.wv", local_encoder.wv},
        {"local.wo", local_encoder.wo},
        {"fuse.weight", fuse_w},
        {"fuse.bias", fuse_b},
        {"head.tag.weight", tag_w},
        {"head.tag.bias", tag_b},
        {"head.pol.weight", pol_w},
        {"head.pol.bias", pol_b},
    };
}

NamedTensors ModelParams::trainable(const ModelConfig& config) const {
    NamedTensors out;
    for (auto& [name, t] : named()) {
        if (!t.requires_grad()) continue;
        if (name == "embed.lce" && config.lce_mode == LceMode::off) continue;
        // the post-local encoder only exists while CDM routes features into it
        if (name.starts_with("local.") && !config.cdm_enabled) continue;
        out.emplace_back(name, t);
    }
    return out;
}

std::vector<Tensor> ModelParams::decayed(const ModelConfig& config) const {
    std::vector<Tensor> out;
    for (auto& [name, t] : trainable(config)) {
        if (name.ends_with(".bias")) continue;
        // a disabled LCP head is outside every objective, decay included
        if (name == "head.tag.weight" && !config.lcp_enabled) continue;
        out.push_back(t);
    }
    return out;
}

std::size_t ModelParams::parameter_count() const {
    std::size_t n = 0;
    for (auto& [name, t] : named()) n += t.numel();
    return n;
}

std::size_t ModelParams::trainable_count(const ModelConfig& config) const {
    std::size_t n = 0;
    for (auto& [name, t] : trainable(config)) n += t.numel();
    return n;
}

Tensor embed(const std::vector<int>& ids, const Tensor& table, double dropout_rate,
             std::mt19937_64* rng, Mode mode) {
    Tensor x = rows_lookup(table, ids);
    if (mode == Mode::train && dropout_rate > 0.0) {
        if (!rng) throw ContractError("embed: train-mode dropout needs an rng");
        x = dropout(x, dropout_rate, *rng, true);
    }
    return x;
}

Tensor mhsa(const Tensor& x, const EncoderParams& enc, std::size_t heads, std::size_t valid_len,
            std::vector<double>* mean_attention) {
    if (x.rank() != 2 || x.cols() != enc.wq.rows()) {
        throw ShapeError("mhsa: input " + shape_str(x.shape()) + " does not match projections " +
                         shape_str(enc.wq.shape()));
    }
    const std::size_t d = x.cols();
    if (heads == 0 || d % heads != 0) {
        throw ShapeError("mhsa: hidden size " + std::to_string(d) + " not divisible by " +
                         std::to_string(heads) + " heads");
    }
    const std::size_t dk = d / heads;
    const std::size_t n = x.rows();

    Tensor q = matmul(x, enc.wq);
    Tensor k = matmul(x, enc.wk);
    Tensor v = matmul(x, enc.wv);

    if (mean_attention) mean_attention->assign(n * n, 0.0);
    std::vector<double> head_attn;
    std::vector<Tensor> head_outs;
    head_outs.reserve(heads);
    for (std::size_t h = 0; h < heads; ++h) {
        Tensor qh = slice_cols(q, h * dk, dk);
        Tensor kh = slice_cols(k, h * dk, dk);
        Tensor vh = slice_cols(v, h * dk, dk);
        head_outs.push_back(scaled_dot_attention(qh, kh, vh, valid_len,
                                                 mean_attention ? &head_attn : nullptr));
        if (mean_attention) {
            for (std::size_t i = 0; i < head_attn.size(); ++i) {
                (*mean_attention)[i] += head_attn[i] / static_cast<double>(heads);
            }
        }
    }
    return tanh_op(matmul(concat_cols(head_outs), enc.wo));
}

namespace {

void require_tags(const corpus::EncodedExample& ex, std::size_t pad_len) {
    if (ex.lc_tags.size() != pad_len) {
        throw ContractError("forward: example lacks precomputed LC-tags (have " +
                            std::to_string(ex.lc_tags.size()) + ", need " +
                            std::to_string(pad_len) + ")");
    }
}

}  // namespace

Tensor lce_dot(const std::vector<int>& tags, const Tensor& lce_embedding,
               const Tensor& global_features) {
    Tensor embedded_tags = rows_lookup(lce_embedding, tags);
    return mul(embedded_tags, global_features);
}

Tensor lce_additive(const Tensor& embedded, const std::vector<int>& tags,
                    const Tensor& lce_embedding) {
    return add(embedded, rows_lookup(lce_embedding, tags));
}

ForwardResult forward(std::span<const corpus::EncodedExample> batch, const ModelParams& params,
                      const ModelConfig& config, Mode mode, std::mt19937_64* rng,
                      bool want_attention) {
    if (batch.empty()) throw ContractError("forward: empty batch");
    ForwardResult result;
    std::vector<Tensor> polarity_rows;
    std::vector<Tensor> tag_blocks;
    polarity_rows.reserve(batch.size());
    tag_blocks.reserve(batch.size());

    for (const corpus::EncodedExample& ex : batch) {
        require_tags(ex, config.pad_len);
        if (ex.valid_len == 0) throw ContractError("forward: example with no valid tokens");

        Tensor x = embed(ex.ids, params.token_embedding, config.dropout, rng, mode);
        if (config.lce_mode == LceMode::additive) {
            x = lce_additive(x, ex.lc_tags, params.lce_embedding);
        }

        std::vector<double>* attn_sink = nullptr;
        if (want_attention) {
            result.attention.emplace_back();
            attn_sink = &result.attention.back();
        }
        Tensor global_features =
            mhsa(x, params.global_encoder, config.heads, ex.valid_len, attn_sink);

        Tensor lce_branch = config.lce_mode == LceMode::dot
                                ? lce_dot(ex.lc_tags, params.lce_embedding, global_features)
                                : global_features;

        Tensor local_branch = global_features;
        if (config.cdm_enabled) {
            lctx::LcTagVector tags{ex.lc_tags, config.alpha};
            Tensor masked = lctx::apply_mask(global_features, lctx::cdm_mask(tags, config.d_h));
            local_branch = mhsa(masked, params.local_encoder, config.heads, ex.valid_len);
        }

        std::vector<Tensor> branches = {lce_branch, local_branch};
        Tensor projected = add_rowvec(matmul(concat_cols(branches), params.fuse_w), params.fuse_b);

        tag_blocks.push_back(softmax(add_rowvec(matmul(projected, params.tag_w), params.tag_b)));

        Tensor pooled = config.pooling == Pooling::mean
                            ? mean_rows_masked(projected, ex.valid_len)
                            : slice_rows(projected, 0, 1);
        polarity_rows.push_back(softmax(add_rowvec(matmul(pooled, params.pol_w), params.pol_b)));
    }

    result.polarity_probs = concat_rows(polarity_rows);
    result.tag_probs = reshape(concat_rows(tag_blocks), {batch.size(), config.pad_len, 2});
    return result;
}

Prediction predict(const ModelParams& params, const ModelConfig& config,
                   const corpus::Vocabulary& vocab, const std::string& sentence,
                   const std::string& target) {
    std::vector<std::string> tokens = corpus::tokenize(sentence);
    std::vector<std::string> target_tokens = corpus::tokenize(target);
    if (tokens.empty() || target_tokens.empty()) {
        throw ContractError("predict: sentence and target must both tokenize to something");
    }
    std::size_t at = tokens.size();
    for (std::size_t i = 0; i + target_tokens.size() <= tokens.size(); ++i) {
        if (std::equal(target_tokens.begin(), target_tokens.end(), tokens.begin() + i)) {
            at = i;
            break;
        }
    }
    if (at == tokens.size()) {
        throw IndexError("predict: target '" + target + "' does not occur in the sentence");
    }

    corpus::RawExample raw;
    raw.tokens = std::move(tokens);
    raw.target_begin = at;
    raw.target_end = at + target_tokens.size();
    corpus::EncodedExample encoded = corpus::encode(raw, vocab, config.pad_len);
    encoded.lc_tags = lctx::lc_tags(encoded.valid_len, {encoded.target_begin, encoded.target_end},
                                    config.alpha, config.pad_len)
                          .tags;

    autograd::NoGradGuard guard;
    ForwardResult out = forward({&encoded, 1}, params, config, Mode::eval, nullptr, true);

    Prediction pred;
    const std::vector<double>& pol = out.polarity_probs.values();
    pred.polarity = static_cast<corpus::Polarity>(
        std::max_element(pol.begin(), pol.begin() + 3) - pol.begin());
    const std::size_t window_start = raw.target_begin - encoded.target_begin;
    for (std::size_t i = 0; i < encoded.valid_len; ++i) {
        pred.tokens.push_back(raw.tokens[window_start + i]);
        const double p0 = out.tag_probs.values()[i * 2];
        const double p1 = out.tag_probs.values()[i * 2 + 1];
        pred.predicted_tags.push_back(p1 > p0 ? 1 : 0);
        pred.gold_tags.push_back(encoded.lc_tags[i]);
    }
    // mean attention received per token over heads and valid query rows
    const std::vector<double>& attn = out.attention[0];
    pred.attention_received.assign(encoded.valid_len, 0.0);
    for (std::size_t i = 0; i < encoded.valid_len; ++i) {
        for (std::size_t j = 0; j < encoded.valid_len; ++j) {
            pred.attention_received[j] += attn[i * config.pad_len + j];
        }
    }
    for (double& a : pred.attention_received) a /= static_cast<double>(encoded.valid_len);
    return pred;
}

}  // namespace lca::model
