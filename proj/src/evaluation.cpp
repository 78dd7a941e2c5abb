#include "lca/evaluation.hpp"

#include <algorithm>
#include <fstream>

#include "lca/errors.hpp"
#include "lca/metrics.hpp"
#include "lca/ops.hpp"

namespace lca::eval {

double accuracy(std::span<const int> predicted, std::span<const int> gold) {
    if (predicted.empty() || predicted.size() != gold.size()) {
        throw ContractError("accuracy: need equal non-empty label sequences, got " +
                            std::to_string(predicted.size()) + " and " +
                            std::to_string(gold.size()));
    }
    std::size_t hits = 0;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        if (predicted[i] == gold[i]) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(predicted.size());
}

namespace {

std::array<std::array<std::size_t, 3>, 3> confusion_matrix(std::span<const int> predicted,
                                                           std::span<const int> gold) {
    std::array<std::array<std::size_t, 3>, 3> m{};
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        if (gold[i] < 0 || gold[i] > 2 || predicted[i] < 0 || predicted[i] > 2) {
            throw IndexError("labels must be in {0, 1, 2}, got gold " + std::to_string(gold[i]) +
                             " / pred " + std::to_string(predicted[i]));
        }
        ++m[static_cast<std::size_t>(gold[i])][static_cast<std::size_t>(predicted[i])];
    }
    return m;
}

// per-class precision/recall/F1 with the 0/0 -> 0 convention
void fill_prf(const std::array<std::array<std::size_t, 3>, 3>& m, MetricsReport& r) {
    double f1_sum = 0.0;
    for (std::size_t c = 0; c < 3; ++c) {
        std::size_t tp = m[c][c], pred_c = 0, gold_c = 0;
        for (std::size_t k = 0; k < 3; ++k) {
            pred_c += m[k][c];
            gold_c += m[c][k];
        }
        r.precision[c] = pred_c == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(pred_c);
        r.recall[c] = gold_c == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(gold_c);
        double pr = r.precision[c] + r.recall[c];
        r.f1[c] = pr == 0.0 ? 0.0 : 2.0 * r.precision[c] * r.recall[c] / pr;
        f1_sum += r.f1[c];
    }
    r.macro_f1 = f1_sum / 3.0;
}

}  // namespace

double macro_f1(std::span<const int> predicted, std::span<const int> gold) {
    if (predicted.empty() || predicted.size() != gold.size()) {
        throw ContractError("macro_f1: need equal non-empty label sequences");
    }
    MetricsReport r;
    fill_prf(confusion_matrix(predicted, gold), r);
    return r.macro_f1;
}

MetricsReport evaluate(const model::ModelParams& params, const model::ModelConfig& config,
                       std::span<const corpus::EncodedExample> test) {
    if (test.empty()) throw ContractError("evaluate: empty test split");
    autograd::NoGradGuard guard;

    std::vector<int> pred, gold;
    pred.reserve(test.size());
    gold.reserve(test.size());
    std::size_t tag_hits = 0, tag_total = 0;

    for (std::size_t at = 0; at < test.size(); at += config.batch_size) {
        const std::size_t take = std::min(config.batch_size, test.size() - at);
        model::ForwardResult out =
            model::forward(test.subspan(at, take), params, config, model::Mode::eval);
        for (std::size_t i = 0; i < take; ++i) {
            const double* row = out.polarity_probs.values().data() + i * 3;
            pred.push_back(static_cast<int>(std::max_element(row, row + 3) - row));
            gold.push_back(static_cast<int>(test[at + i].polarity));
            const corpus::EncodedExample& ex = test[at + i];
            const double* tags = out.tag_probs.values().data() + i * config.pad_len * 2;
            for (std::size_t t = 0; t < ex.valid_len; ++t) {
                int predicted_tag = tags[t * 2 + 1] > tags[t * 2] ? 1 : 0;
                if (predicted_tag == ex.lc_tags[t]) ++tag_hits;
                ++tag_total;
            }
        }
    }

    MetricsReport r;
    r.count = test.size();
    r.confusion = confusion_matrix(pred, gold);
    r.accuracy = accuracy(pred, gold);
    fill_prf(r.confusion, r);
    r.lc_tag_accuracy =
        tag_total == 0 ? 0.0 : static_cast<double>(tag_hits) / static_cast<double>(tag_total);
    return r;
}

MetricsReport evaluate_checkpoint(const train::Checkpoint& ckpt,
                                  const std::vector<corpus::RawExample>& test) {
    std::vector<corpus::EncodedExample> encoded;
    encoded.reserve(test.size());
    for (const corpus::RawExample& ex : test) {
        encoded.push_back(corpus::encode(ex, ckpt.vocab, ckpt.config.pad_len));
    }
    corpus::attach_lc_tags(encoded, ckpt.config.alpha, ckpt.config.pad_len);
    return evaluate(ckpt.params, ckpt.config, encoded);
}

const char* variant_name(Variant v) {
    switch (v) {
        case Variant::full: return "full";
        case Variant::no_lce: return "no_lce";
        case Variant::no_lcp: return "no_lcp";
        case Variant::no_cdm: return "no_cdm";
        case Variant::plain: return "plain";
    }
    return "?";
}

std::optional<Variant> variant_from_name(const std::string& name) {
    for (Variant v : {Variant::full, Variant::no_lce, Variant::no_lcp, Variant::no_cdm,
                      Variant::plain}) {
        if (name == variant_name(v)) return v;
    }
    return std::nullopt;
}

model::ModelConfig apply_variant(model::ModelConfig config, Variant v) {
    switch (v) {
        case Variant::full: break;
        case Variant::no_lce: config.lce_mode = model::LceMode::off; break;
        case Variant::no_lcp: config.lcp_enabled = false; break;
        case Variant::no_cdm: config.cdm_enabled = false; break;
        case Variant::plain:
            config.lce_mode = model::LceMode::off;
            config.lcp_enabled = false;
            config.cdm_enabled = false;
            break;
    }
    return config;
}

std::vector<AblationRow> run_ablation(const model::ModelConfig& base,
                                      const corpus::Vocabulary& vocab, const Tensor& embedding,
                                      bool pretrained,
                                      const std::vector<corpus::EncodedExample>& train_set,
                                      const std::vector<corpus::EncodedExample>& test_set,
                                      std::span<const Variant> variants) {
    std::vector<AblationRow> rows;
    rows.reserve(variants.size());
    for (Variant v : variants) {
        model::ModelConfig config = apply_variant(base, v);
        train::TrainResult result =
            train::train(config, vocab, embedding, pretrained, train_set, test_set);
        rows.push_back({v, result.report.final_metrics});
    }
    return rows;
}

std::vector<SweepPoint> sigma_sweep(const model::ModelConfig& base,
                                    const corpus::Vocabulary& vocab, const Tensor& embedding,
                                    bool pretrained,
                                    const std::vector<corpus::EncodedExample>& train_set,
                                    const std::vector<corpus::EncodedExample>& test_set,
                                    std::span<const double> sigmas) {
    std::vector<SweepPoint> points;
    points.reserve(sigmas.size());
    for (double sigma : sigmas) {
        model::ModelConfig config = base;
        config.sigma = sigma;
        config.validate();
        train::TrainResult result =
            train::train(config, vocab, embedding, pretrained, train_set, test_set);
        points.push_back(
            {sigma, result.report.final_metrics.accuracy, result.report.final_metrics.macro_f1});
    }
    return points;
}

void export_attention(const train::Checkpoint& ckpt, const std::string& sentence,
                      const std::string& target, const std::string& path) {
    model::Prediction pred =
        model::predict(ckpt.params, ckpt.config, ckpt.vocab, sentence, target);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write attention export '" + path + "'");
    out << "token,gold_tag,pred_tag,attention\n";
    for (std::size_t i = 0; i < pred.tokens.size(); ++i) {
        std::string token = pred.tokens[i];
        if (token.find_first_of(",\"") != std::string::npos) {
            std::string quoted = "\"";
            for (char c : token) {
                if (c == '"') quoted += '"';
                quoted += c;
            }
            quoted += '"';
            token = quoted;
        }
        out << token << ',' << pred.gold_tags[i] << ',' << pred.predicted_tags[i] << ','
            << pred.attention_received[i] << '\n';
    }
    if (!out) throw IoError("failed while writing '" + path + "'");
}

}  // namespace lca::eval
