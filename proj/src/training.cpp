#include "lca/training.hpp"

#include <algorithm>
#include <chrono>
#include <cstring>
#include <fstream>
#include <iostream>
#include <map>
#include <numeric>
#include <random>

#include "lca/adam.hpp"
#include "lca/errors.hpp"
#include "lca/ops.hpp"

namespace lca::train {

Tensor lcp_loss(const Tensor& tag_probs, std::span<const corpus::EncodedExample> batch) {
    if (tag_probs.rank() != 3 || tag_probs.dim(0) != batch.size() || tag_probs.dim(2) != 2) {
        throw ShapeError("lcp_loss: tag probabilities " + shape_str(tag_probs.shape()) +
                         " do not match a batch of " + std::to_string(batch.size()));
    }
    const std::size_t pad_len = tag_probs.dim(1);
    std::vector<int> gold(batch.size() * pad_len, 0);
    std::vector<double> weights(batch.size() * pad_len, 0.0);
    for (std::size_t e = 0; e < batch.size(); ++e) {
        const corpus::EncodedExample& ex = batch[e];
        if (ex.lc_tags.size() != pad_len) {
            throw ShapeError("lcp_loss: example " + std::to_string(e) + " carries " +
                             std::to_string(ex.lc_tags.size()) + " tags for pad length " +
                             std::to_string(pad_len));
        }
        for (std::size_t i = 0; i < ex.valid_len && i < pad_len; ++i) {
            gold[e * pad_len + i] = ex.lc_tags[i];
            weights[e * pad_len + i] = 1.0;
        }
    }
    return cross_entropy(reshape(tag_probs, {batch.size() * pad_len, 2}), gold, weights);
}

JointLoss joint_loss(const Tensor& polarity_probs, const std::vector<int>& gold_polarity,
                     const Tensor& tag_probs, std::span<const corpus::EncodedExample> batch,
                     std::span<const Tensor> decayed_params, double sigma, double lambda) {
    if (sigma < 0.0 || sigma > 1.0) {
        throw ConfigError("joint_loss: sigma must be in [0, 1], got " + std::to_string(sigma));
    }
    JointLoss out;
    Tensor pol = cross_entropy(polarity_probs, gold_polarity);
    Tensor lcp = lcp_loss(tag_probs, batch);
    Tensor l2 = l2_penalty(decayed_params, lambda);
    out.polarity = pol.scalar_value();
    out.lcp = lcp.scalar_value();
    out.l2 = l2.scalar_value();
    out.total = add(add(scale(pol, 1.0 - sigma), scale(lcp, sigma)), l2);
    return out;
}

namespace {

std::vector<int> gold_polarities(std::span<const corpus::EncodedExample> batch) {
    std::vector<int> gold;
    gold.reserve(batch.size());
    for (const corpus::EncodedExample& ex : batch) gold.push_back(static_cast<int>(ex.polarity));
    return gold;
}

}  // namespace

TrainResult train(const model::ModelConfig& config, const corpus::Vocabulary& vocab,
                  Tensor token_embedding, bool pretrained_vectors,
                  const std::vector<corpus::EncodedExample>& train_set,
                  const std::vector<corpus::EncodedExample>& test_set,
                  const TrainOptions& options) {
    config.validate();
    if (train_set.empty()) throw ContractError("train: empty training set");

    std::mt19937_64 rng(config.seed);
    model::ModelParams params = model::ModelParams::init(config, std::move(token_embedding), rng);
    NamedTensors trainable = params.trainable(config);
    std::vector<Tensor> decayed = params.decayed(config);
    AdamState adam;
    if (!options.quiet) {
        std::cout << "parameters: " << params.parameter_count() << " total, "
                  << params.trainable_count(config) << " trainable\n";
    }

    TrainReport report;
    report.seed = config.seed;
    report.pretrained_vectors = pretrained_vectors;

    std::vector<std::size_t> order(train_set.size());
    std::iota(order.begin(), order.end(), 0);

    for (std::size_t epoch = 1; epoch <= config.epochs; ++epoch) {
        const auto epoch_start = std::chrono::steady_clock::now();
        std::shuffle(order.begin(), order.end(), rng);

        EpochStats stats;
        std::vector<int> train_pred, train_gold;
        double seen = 0.0;
        for (std::size_t at = 0; at < order.size(); at += config.batch_size) {
            const std::size_t take = std::min(config.batch_size, order.size() - at);
            std::vector<corpus::EncodedExample> batch;
            batch.reserve(take);
            for (std::size_t i = 0; i < take; ++i) batch.push_back(train_set[order[at + i]]);

            model::ForwardResult out =
                model::forward(batch, params, config, model::Mode::train, &rng);
            std::vector<int> gold = gold_polarities(batch);

            JointLoss loss;
            if (config.lcp_enabled) {
                loss = joint_loss(out.polarity_probs, gold, out.tag_probs, batch, decayed,
                                  config.sigma, config.lambda);
            } else {
                Tensor pol = cross_entropy(out.polarity_probs, gold);
                Tensor l2 = l2_penalty(decayed, config.lambda);
                loss.polarity = pol.scalar_value();
                loss.l2 = l2.scalar_value();
                loss.total = add(pol, l2);
            }
            if (!loss.total.all_finite() || !std::isfinite(loss.total.scalar_value())) {
                throw DivergenceError("loss diverged at epoch " + std::to_string(epoch) +
                                      ", batch " + std::to_string(at / config.batch_size));
            }

            autograd::backward(loss.total);
            adam_step(trainable, adam, config.learning_rate);

            const double w = static_cast<double>(take);
            stats.train_loss += loss.total.scalar_value() * w;
            stats.polarity_loss += loss.polarity * w;
            stats.lcp_loss += loss.lcp * w;
            seen += w;
            for (std::size_t i = 0; i < take; ++i) {
                const double* row = out.polarity_probs.values().data() + i * 3;
                train_pred.push_back(static_cast<int>(std::max_element(row, row + 3) - row));
                train_gold.push_back(gold[i]);
            }
        }
        stats.train_loss /= seen;
        stats.polarity_loss /= seen;
        stats.lcp_loss /= seen;
        stats.train_accuracy = eval::accuracy(train_pred, train_gold);
        stats.train_macro_f1 = eval::macro_f1(train_pred, train_gold);

        eval::MetricsReport test_metrics;
        if (!test_set.empty()) {
            test_metrics = eval::evaluate(params, config, test_set);
            stats.test_accuracy = test_metrics.accuracy;
            stats.test_macro_f1 = test_metrics.macro_f1;
        }
        stats.wall_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - epoch_start).count();
        report.epochs.push_back(stats);

        if (report.best_epoch == 0 || stats.test_accuracy > report.best_metrics.accuracy) {
            report.best_epoch = epoch;
            report.best_metrics = test_metrics;
        }
        report.final_metrics = test_metrics;

        if (!options.quiet) {
            std::cout << "epoch " << epoch << "/" << config.epochs << "  loss " << stats.train_loss
                      << "  train_acc " << stats.train_accuracy << "  test_acc "
                      << stats.test_accuracy << "  (" << stats.wall_seconds << "s)\n";
        }
        if (options.stop_at_perfect_train_accuracy && stats.train_accuracy >= 1.0) break;
    }

    TrainResult result;
    result.checkpoint.config = config;
    result.checkpoint.vocab = vocab;
    result.checkpoint.params = std::move(params);
    result.checkpoint.final_metrics = report.final_metrics;
    result.report = std::move(report);
    return result;
}

// ---- checkpoint serialization ------------------------------------------

namespace {

constexpr char kMagic[8] = {'L', 'C', 'A', 'C', 'K', 'P', 'T', '\0'};

struct Writer {
    std::ofstream out;
    explicit Writer(const std::string& path) : out(path, std::ios::binary) {
        if (!out) throw IoError("cannot write checkpoint '" + path + "'");
    }
    void bytes(const void* p, std::size_t n) { out.write(static_cast<const char*>(p), n); }
    void u8(std::uint8_t v) { bytes(&v, 1); }
    void u32(std::uint32_t v) { bytes(&v, 4); }
    void u64(std::uint64_t v) { bytes(&v, 8); }
    void i32(std::int32_t v) { bytes(&v, 4); }
    void f64(double v) { bytes(&v, 8); }
    void str(const std::string& s) {
        u32(static_cast<std::uint32_t>(s.size()));
        bytes(s.data(), s.size());
    }
};

struct Reader {
    std::ifstream in;
    std::string path;
    explicit Reader(const std::string& p) : in(p, std::ios::binary), path(p) {
        if (!in) throw IoError("cannot open checkpoint '" + p + "'");
    }
    void bytes(void* p, std::size_t n) {
        in.read(static_cast<char*>(p), static_cast<std::streamsize>(n));
        if (in.gcount() != static_cast<std::streamsize>(n)) {
            throw FormatError("checkpoint '" + path + "' is truncated");
        }
    }
    std::uint8_t u8() { std::uint8_t v; bytes(&v, 1); return v; }
    std::uint32_t u32() { std::uint32_t v; bytes(&v, 4); return v; }
    std::uint64_t u64() { std::uint64_t v; bytes(&v, 8); return v; }
    std::int32_t i32() { std::int32_t v; bytes(&v, 4); return v; }
    double f64() { double v; bytes(&v, 8); return v; }
    std::string str() {
        std::uint32_t n = u32();
        if (n > (1u << 24)) throw FormatError("checkpoint '" + path + "': implausible string");
        std::string s(n, '\0');
        bytes(s.data(), n);
        return s;
    }
};

void write_metrics(Writer& w, const eval::MetricsReport& m) {
    w.f64(m.accuracy);
    w.f64(m.macro_f1);
    w.f64(m.lc_tag_accuracy);
    for (int c = 0; c < 3; ++c) {
        w.f64(m.precision[c]);
        w.f64(m.recall[c]);
        w.f64(m.f1[c]);
    }
    for (const auto& row : m.confusion) {
        for (std::size_t v : row) w.u64(v);
    }
    w.u64(m.count);
}

eval::MetricsReport read_metrics(Reader& r) {
    eval::MetricsReport m;
    m.accuracy = r.f64();
    m.macro_f1 = r.f64();
    m.lc_tag_accuracy = r.f64();
    for (int c = 0; c < 3; ++c) {
        m.precision[c] = r.f64();
        m.recall[c] = r.f64();
        m.f1[c] = r.f64();
    }
    for (auto& row : m.confusion) {
        for (std::size_t& v : row) v = r.u64();
    }
    m.count = r.u64();
    return m;
}

}  // namespace

void save_checkpoint(const Checkpoint& ckpt, const std::string& path) {
    Writer w(path);
    w.bytes(kMagic, sizeof(kMagic));
    w.u32(Checkpoint::kVersion);

    const model::ModelConfig& c = ckpt.config;
    w.u64(c.d_h);
    w.u64(c.heads);
    w.f64(c.dropout);
    w.u64(c.pad_len);
    w.i32(c.alpha);
    w.f64(c.sigma);
    w.f64(c.lambda);
    w.f64(c.learning_rate);
    w.u64(c.batch_size);
    w.u64(c.epochs);
    w.u8(static_cast<std::uint8_t>(c.lce_mode));
    w.u8(c.lcp_enabled ? 1 : 0);
    w.u8(c.cdm_enabled ? 1 : 0);
    w.u8(static_cast<std::uint8_t>(c.pooling));
    w.u64(c.seed);

    w.u64(ckpt.vocab.size());
    for (std::size_t i = 0; i < ckpt.vocab.size(); ++i) {
        w.str(ckpt.vocab.token(static_cast<int>(i)));
    }

    NamedTensors tensors = ckpt.params.named();
    w.u64(tensors.size());
    for (const auto& [name, t] : tensors) {
        w.str(name);
        w.u8(t.requires_grad() ? 1 : 0);
        w.u32(static_cast<std::uint32_t>(t.rank()));
        for (std::size_t d : t.shape()) w.u64(d);
        w.bytes(t.values().data(), t.numel() * sizeof(double));
    }

    write_metrics(w, ckpt.final_metrics);
    w.out.flush();
    if (!w.out) throw IoError("failed while writing checkpoint '" + path + "'");
}

Checkpoint load_checkpoint(const std::string& path) {
    Reader r(path);
    char magic[8];
    r.bytes(magic, sizeof(magic));
    if (std::memcmp(magic, kMagic, sizeof(magic)) != 0) {
        throw FormatError("'" + path + "' is not a checkpoint file");
    }
    std::uint32_t version = r.u32();
    if (version != Checkpoint::kVersion) {
        throw IncompatibleError("checkpoint '" + path + "' has version " +
                                std::to_string(version) + ", expected " +
                                std::to_string(Checkpoint::kVersion));
    }

    Checkpoint ckpt;
    model::ModelConfig& c = ckpt.config;
    c.d_h = r.u64();
    c.heads = r.u64();
    c.dropout = r.f64();
    c.pad_len = r.u64();
    c.alpha = r.i32();
    c.sigma = r.f64();
    c.lambda = r.f64();
    c.learning_rate = r.f64();
    c.batch_size = r.u64();
    c.epochs = r.u64();
    c.lce_mode = static_cast<model::LceMode>(r.u8());
    c.lcp_enabled = r.u8() != 0;
    c.cdm_enabled = r.u8() != 0;
    c.pooling = static_cast<model::Pooling>(r.u8());
    c.seed = r.u64();
    c.validate();

    const std::uint64_t vocab_count = r.u64();
    for (std::uint64_t i = 0; i < vocab_count; ++i) {
        std::string token = r.str();
        if (i < 2) {
            if (ckpt.vocab.token(static_cast<int>(i)) != token) {
                throw FormatError("checkpoint '" + path + "': reserved vocabulary slot " +
                                  std::to_string(i) + " holds '" + token + "'");
            }
        } else {
            ckpt.vocab.add(token);
        }
    }

    std::map<std::string, Tensor> by_name;
    const std::uint64_t tensor_count = r.u64();
    for (std::uint64_t i = 0; i < tensor_count; ++i) {
        std::string name = r.str();
        bool rg = r.u8() != 0;
        std::uint32_t rank = r.u32();
        if (rank == 0 || rank > 4) {
            throw FormatError("checkpoint '" + path + "': tensor '" + name + "' has rank " +
                              std::to_string(rank));
        }
        Shape shape(rank);
        std::size_t numel = 1;
        for (std::uint32_t d = 0; d < rank; ++d) {
            shape[d] = r.u64();
            numel *= shape[d];
        }
        if (numel == 0 || numel > (1ull << 32)) {
            throw FormatError("checkpoint '" + path + "': tensor '" + name +
                              "' has implausible size");
        }
        std::vector<double> values(numel);
        r.bytes(values.data(), numel * sizeof(double));
        by_name.emplace(name, Tensor::from_values(std::move(shape), std::move(values), rg));
    }

    auto take = [&](const char* name) {
        auto it = by_name.find(name);
        if (it == by_name.end()) {
            throw FormatError("checkpoint '" + path + "': missing tensor '" + name + "'");
        }
        return it->second;
    };
    model::ModelParams& p = ckpt.params;
    p.token_embedding = take("embed.tokens");
    p.lce_embedding = take("embed.lce");
    p.global_encoder = {take("global.wq"), take("global.wk"), take("global.wv"),
                        take("global.wo")};
    p.local_encoder = {take("local.wq"), take("local.wk"), take("local.wv"), take("local.wo")};
    p.fuse_w = take("fuse.weight");
    p.fuse_b = take("fuse.bias");
    p.tag_w = take("head.tag.weight");
    p.tag_b = take("head.tag.bias");
    p.pol_w = take("head.pol.weight");
    p.pol_b = take("head.pol.bias");
    if (p.token_embedding.rows() != ckpt.vocab.size() || p.token_embedding.cols() != c.d_h) {
        throw FormatError("checkpoint '" + path + "': embedding shape " +
                          shape_str(p.token_embedding.shape()) + " does not match vocabulary/" +
                          "d_h");
    }

    ckpt.final_metrics = read_metrics(r);
    if (r.in.peek() != std::char_traits<char>::eof()) {
        throw FormatError("checkpoint '" + path + "' has trailing bytes");
    }
    return ckpt;
}

}  // namespace lca::train
