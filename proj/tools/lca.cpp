// Command-line front end: ingest / train / eval / ablate / sweep-sigma /
// predict / export-attention over the laptop, restaurant and twitter corpora.

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "lca/corpus.hpp"
#include "lca/errors.hpp"
#include "lca/evaluation.hpp"
#include "lca/model.hpp"
#include "lca/training.hpp"

namespace {

using namespace lca;

int exit_code_for(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::parse: return 3;
        case ErrorKind::format: return 4;
        case ErrorKind::io: return 5;
        case ErrorKind::config: return 6;
        case ErrorKind::divergence: return 7;
        case ErrorKind::incompatible: return 8;
        case ErrorKind::shape:
        case ErrorKind::contract:
        case ErrorKind::index: return 9;
    }
    return 9;
}

struct CliOptions {
    std::string dataset;
    std::string data_dir = "data";
    std::string vectors;
    std::string checkpoint;
    std::string out_dir = ".";
    std::string config_path;
    std::string sentence, target, output;
    std::vector<std::string> variants = {"full", "no_lce", "no_lcp", "no_cdm"};
    std::vector<double> sigmas = {0.0, 0.2, 0.4, 0.6, 0.8, 1.0};
    model::ModelConfig config;
    std::string lce_mode = "dot";
    std::string pooling = "mean";
    bool alpha_given = false;
};

// Flat key=value file mirroring the ModelConfig field names. Flags beat the
// file, the file beats defaults; unknown keys are a hard error.
void apply_config_file(const CLI::App* cmd, CliOptions& opt) {
    if (opt.config_path.empty()) return;
    std::ifstream in(opt.config_path);
    if (!in) throw IoError("cannot open config file '" + opt.config_path + "'");

    auto flag_given = [&](const char* flag) { return cmd->count(flag) > 0; };
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::string_view sv = line;
        while (!sv.empty() && (sv.front() == ' ' || sv.front() == '\t')) sv.remove_prefix(1);
        if (sv.empty() || sv.front() == '#') continue;
        std::size_t eq = sv.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("config file line " + std::to_string(line_no) +
                              ": expected key=value, got '" + std::string(sv) + "'");
        }
        auto strip = [](std::string_view v) {
            while (!v.empty() && (v.front() == ' ' || v.front() == '\t')) v.remove_prefix(1);
            while (!v.empty() && (v.back() == ' ' || v.back() == '\t')) v.remove_suffix(1);
            return std::string(v);
        };
        const std::string key = strip(sv.substr(0, eq));
        const std::string value = strip(sv.substr(eq + 1));
        auto bad_value = [&]() {
            return ConfigError("config file line " + std::to_string(line_no) + ": bad value '" +
                               value + "' for " + key);
        };
        auto as_double = [&]() {
            try {
                return std::stod(value);
            } catch (...) {
                throw bad_value();
            }
        };
        auto as_size = [&]() {
            try {
                return static_cast<std::size_t>(std::stoull(value));
            } catch (...) {
                throw bad_value();
            }
        };
        auto as_bool = [&]() {
            if (value == "true" || value == "1") return true;
            if (value == "false" || value == "0") return false;
            throw bad_value();
        };

        if (key == "d_h") {
            if (!flag_given("--d_h")) opt.config.d_h = as_size();
        } else if (key == "heads") {
            if (!flag_given("--heads")) opt.config.heads = as_size();
        } else if (key == "dropout") {
            if (!flag_given("--dropout")) opt.config.dropout = as_double();
        } else if (key == "pad_len") {
            if (!flag_given("--pad_len")) opt.config.pad_len = as_size();
        } else if (key == "alpha") {
            if (!flag_given("--alpha")) {
                opt.config.alpha = static_cast<int>(as_size());
                opt.alpha_given = true;
            }
        } else if (key == "sigma") {
            if (!flag_given("--sigma")) opt.config.sigma = as_double();
        } else if (key == "lambda") {
            if (!flag_given("--lambda")) opt.config.lambda = as_double();
        } else if (key == "learning_rate") {
            if (!flag_given("--learning_rate")) opt.config.learning_rate = as_double();
        } else if (key == "batch_size") {
            if (!flag_given("--batch_size")) opt.config.batch_size = as_size();
        } else if (key == "epochs") {
            if (!flag_given("--epochs")) opt.config.epochs = as_size();
        } else if (key == "lce_mode") {
            if (!flag_given("--lce_mode")) opt.lce_mode = value;
        } else if (key == "lcp_enabled") {
            if (!flag_given("--lcp_enabled")) opt.config.lcp_enabled = as_bool();
        } else if (key == "cdm_enabled") {
            if (!flag_given("--cdm_enabled")) opt.config.cdm_enabled = as_bool();
        } else if (key == "pooling") {
            if (!flag_given("--pooling")) opt.pooling = value;
        } else if (key == "seed") {
            if (!flag_given("--seed")) opt.config.seed = as_size();
        } else {
            throw ConfigError("config file line " + std::to_string(line_no) +
                              ": unknown key '" + key + "'");
        }
    }
}

void echo_config(const model::ModelConfig& c, const std::string& dataset) {
    std::cout << "resolved configuration:\n";
    if (!dataset.empty()) std::cout << "  dataset        = " << dataset << "\n";
    std::cout << "  d_h            = " << c.d_h << "\n"
              << "  heads          = " << c.heads << "\n"
              << "  dropout        = " << c.dropout << "\n"
              << "  pad_len        = " << c.pad_len << "\n"
              << "  alpha          = " << c.alpha << "\n"
              << "  sigma          = " << c.sigma << "\n"
              << "  lambda         = " << c.lambda << "\n"
              << "  learning_rate  = " << c.learning_rate << "\n"
              << "  batch_size     = " << c.batch_size << "\n"
              << "  epochs         = " << c.epochs << "\n"
              << "  lce_mode       = " << model::lce_mode_name(c.lce_mode) << "\n"
              << "  lcp_enabled    = " << (c.lcp_enabled ? "true" : "false") << "\n"
              << "  cdm_enabled    = " << (c.cdm_enabled ? "true" : "false") << "\n"
              << "  pooling        = " << model::pooling_name(c.pooling) << "\n"
              << "  seed           = " << c.seed << "\n";
}

corpus::DatasetId require_dataset(const CliOptions& opt) {
    auto id = corpus::dataset_from_name(opt.dataset);
    if (!id) throw ConfigError("unknown dataset '" + opt.dataset + "'");
    return *id;
}

// flags > config file > per-dataset default
void resolve_enums(CliOptions& opt) {
    auto mode = model::lce_mode_from_name(opt.lce_mode);
    if (!mode) throw ConfigError("lce_mode must be dot, additive or off, got '" + opt.lce_mode + "'");
    opt.config.lce_mode = *mode;
    auto pool = model::pooling_from_name(opt.pooling);
    if (!pool) throw ConfigError("pooling must be mean or first, got '" + opt.pooling + "'");
    opt.config.pooling = *pool;
    if (!opt.dataset.empty() && !opt.alpha_given) {
        opt.config.alpha = corpus::default_alpha(require_dataset(opt));
    }
    opt.config.validate();
}

std::string metrics_csv_path(const CliOptions& opt, const std::string& command) {
    std::filesystem::create_directories(opt.out_dir);
    return (std::filesystem::path(opt.out_dir) /
            (opt.dataset + "_" + command + "_" + std::to_string(opt.config.seed) + ".csv"))
        .string();
}

void print_metrics(const eval::MetricsReport& m) {
    std::cout << std::fixed << std::setprecision(4);
    std::cout << "  accuracy        " << m.accuracy << "\n"
              << "  macro_f1        " << m.macro_f1 << "\n"
              << "  lc_tag_accuracy " << m.lc_tag_accuracy << "\n";
    static const char* names[3] = {"negative", "neutral", "positive"};
    for (int c = 0; c < 3; ++c) {
        std::cout << "  " << std::left << std::setw(9) << names[c] << std::right << " P "
                  << m.precision[c] << "  R " << m.recall[c] << "  F1 " << m.f1[c] << "\n";
    }
    std::cout << "  confusion (rows gold neg/neu/pos):";
    for (const auto& row : m.confusion) {
        std::cout << "  ";
        for (std::size_t v : row) std::cout << v << " ";
    }
    std::cout << "\n" << std::defaultfloat << std::setprecision(6);
}

void write_metrics_csv(const std::string& path, const eval::MetricsReport& m) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path + "'");
    out << "metric,value\n";
    out << "accuracy," << std::setprecision(17) << m.accuracy << "\n";
    out << "macro_f1," << m.macro_f1 << "\n";
    out << "lc_tag_accuracy," << m.lc_tag_accuracy << "\n";
    static const char* names[3] = {"negative", "neutral", "positive"};
    for (int c = 0; c < 3; ++c) {
        out << names[c] << "_precision," << m.precision[c] << "\n";
        out << names[c] << "_recall," << m.recall[c] << "\n";
        out << names[c] << "_f1," << m.f1[c] << "\n";
    }
    for (int g = 0; g < 3; ++g) {
        for (int p = 0; p < 3; ++p) {
            out << "confusion_" << names[g] << "_" << names[p] << "," << m.confusion[g][p] << "\n";
        }
    }
}

struct LoadedData {
    corpus::Corpus corpus;
    corpus::Vocabulary vocab;
    std::vector<corpus::EncodedExample> train, test;
};

LoadedData load_encoded(const CliOptions& opt) {
    LoadedData d;
    d.corpus = corpus::load_dataset(opt.data_dir, require_dataset(opt));
    d.vocab = corpus::build_vocabulary(d.corpus);
    d.train.reserve(d.corpus.train.size());
    for (const auto& ex : d.corpus.train)
        d.train.push_back(corpus::encode(ex, d.vocab, opt.config.pad_len));
    for (const auto& ex : d.corpus.test)
        d.test.push_back(corpus::encode(ex, d.vocab, opt.config.pad_len));
    corpus::attach_lc_tags(d.train, opt.config.alpha, opt.config.pad_len);
    corpus::attach_lc_tags(d.test, opt.config.alpha, opt.config.pad_len);
    return d;
}

// Pretrained vectors when available, random fallback with a loud warning
// otherwise; the bool reports which one happened.
std::pair<Tensor, bool> embeddings_for(const CliOptions& opt, const corpus::Vocabulary& vocab,
                                       std::mt19937_64& rng) {
    if (!opt.vectors.empty() && std::filesystem::exists(opt.vectors)) {
        auto loaded = corpus::load_pretrained_vectors(opt.vectors, vocab, opt.config.d_h, rng);
        std::cout << "vectors: " << loaded.hits << "/" << (loaded.hits + loaded.misses)
                  << " vocabulary tokens covered (" << std::setprecision(3)
                  << loaded.coverage() * 100.0 << "%)\n"
                  << std::setprecision(6);
        return {loaded.matrix, true};
    }
    std::cout << "WARNING: no pretrained vectors"
              << (opt.vectors.empty() ? "" : " at '" + opt.vectors + "'")
              << "; falling back to random embeddings. This is a NON-REPRODUCTION run.\n";
    return {corpus::random_embeddings(vocab, opt.config.d_h, rng), false};
}

int cmd_ingest(const CliOptions& opt) {
    LoadedData d = load_encoded(opt);
    auto tr = corpus::count_polarities(d.corpus.train);
    auto te = corpus::count_polarities(d.corpus.test);
    std::cout << "dataset " << opt.dataset << "\n";
    std::cout << "  split  positive  negative  neutral  total\n";
    std::cout << "  train  " << std::setw(8) << tr.positive << "  " << std::setw(8) << tr.negative
              << "  " << std::setw(7) << tr.neutral << "  " << std::setw(5) << tr.total() << "\n";
    std::cout << "  test   " << std::setw(8) << te.positive << "  " << std::setw(8) << te.negative
              << "  " << std::setw(7) << te.neutral << "  " << std::setw(5) << te.total() << "\n";
    std::cout << "  vocabulary " << d.vocab.size() << " tokens\n";

    std::string path = metrics_csv_path(opt, "ingest");
    std::ofstream out(path, std::ios::binary);
    out << "split,positive,negative,neutral,total\n";
    out << "train," << tr.positive << "," << tr.negative << "," << tr.neutral << "," << tr.total()
        << "\n";
    out << "test," << te.positive << "," << te.negative << "," << te.neutral << "," << te.total()
        << "\n";
    std::cout << "wrote " << path << "\n";
    return 0;
}

int cmd_train(const CliOptions& opt) {
    LoadedData d = load_encoded(opt);
    std::mt19937_64 embed_rng(opt.config.seed);
    auto [embedding, pretrained] = embeddings_for(opt, d.vocab, embed_rng);

    train::TrainResult result =
        train::train(opt.config, d.vocab, embedding, pretrained, d.train, d.test);

    std::string ckpt_path = opt.checkpoint.empty()
                                ? (std::filesystem::path(opt.out_dir) / (opt.dataset + "_lca.ckpt"))
                                      .string()
                                : opt.checkpoint;
    std::filesystem::create_directories(std::filesystem::path(ckpt_path).parent_path().empty()
                                            ? "."
                                            : std::filesystem::path(ckpt_path).parent_path()
                                                  .string());
    train::save_checkpoint(result.checkpoint, ckpt_path);

    std::cout << (pretrained ? "" : "[non-reproduction run] ");
    std::cout << "final test metrics (epoch " << result.report.epochs.size() << "):\n";
    print_metrics(result.report.final_metrics);
    std::cout << "best epoch " << result.report.best_epoch << ": accuracy "
              << result.report.best_metrics.accuracy << ", macro_f1 "
              << result.report.best_metrics.macro_f1 << "\n";
    std::cout << "checkpoint " << ckpt_path << "\n";

    std::string path = metrics_csv_path(opt, "train");
    std::ofstream out(path, std::ios::binary);
    out << "epoch,train_loss,polarity_loss,lcp_loss,train_accuracy,train_macro_f1,"
           "test_accuracy,test_macro_f1,reproduction\n";
    out << std::setprecision(17);
    for (std::size_t e = 0; e < result.report.epochs.size(); ++e) {
        const auto& s = result.report.epochs[e];
        out << (e + 1) << ',' << s.train_loss << ',' << s.polarity_loss << ',' << s.lcp_loss
            << ',' << s.train_accuracy << ',' << s.train_macro_f1 << ',' << s.test_accuracy << ','
            << s.test_macro_f1 << ',' << (pretrained ? 1 : 0) << "\n";
    }
    std::cout << "wrote " << path << "\n";
    return 0;
}

int cmd_eval(CliOptions& opt) {
    if (opt.checkpoint.empty()) throw ConfigError("eval needs --checkpoint");
    train::Checkpoint ckpt = train::load_checkpoint(opt.checkpoint);
    echo_config(ckpt.config, opt.dataset);
    opt.config.seed = ckpt.config.seed;
    corpus::DatasetId id = require_dataset(opt);
    if (ckpt.config.alpha != corpus::default_alpha(id)) {
        std::cout << "WARNING: checkpoint alpha " << ckpt.config.alpha
                  << " differs from the dataset default " << corpus::default_alpha(id)
                  << "; tags use the checkpoint's alpha\n";
    }
    corpus::Corpus c = corpus::load_dataset(opt.data_dir, id);
    eval::MetricsReport m = eval::evaluate_checkpoint(ckpt, c.test);
    std::cout << "test metrics for " << opt.dataset << ":\n";
    print_metrics(m);
    std::string path = metrics_csv_path(opt, "eval");
    write_metrics_csv(path, m);
    std::cout << "wrote " << path << "\n";
    return 0;
}

int cmd_ablate(const CliOptions& opt) {
    LoadedData d = load_encoded(opt);
    std::mt19937_64 embed_rng(opt.config.seed);
    auto [embedding, pretrained] = embeddings_for(opt, d.vocab, embed_rng);

    std::vector<eval::Variant> variants;
    for (const std::string& name : opt.variants) {
        auto v = eval::variant_from_name(name);
        if (!v) throw ConfigError("unknown ablation variant '" + name + "'");
        variants.push_back(*v);
    }
    auto rows =
        eval::run_ablation(opt.config, d.vocab, embedding, pretrained, d.train, d.test, variants);

    std::cout << "variant   accuracy  macro_f1  lc_tag_accuracy\n";
    std::cout << std::fixed << std::setprecision(4);
    for (const auto& row : rows) {
        std::cout << std::left << std::setw(10) << eval::variant_name(row.variant) << std::right
                  << row.metrics.accuracy << "    " << row.metrics.macro_f1 << "    "
                  << row.metrics.lc_tag_accuracy << "\n";
    }
    std::cout << std::defaultfloat << std::setprecision(6);

    std::string path = metrics_csv_path(opt, "ablate");
    std::ofstream out(path, std::ios::binary);
    out << "variant,accuracy,macro_f1,lc_tag_accuracy\n" << std::setprecision(17);
    for (const auto& row : rows) {
        out << eval::variant_name(row.variant) << ',' << row.metrics.accuracy << ','
            << row.metrics.macro_f1 << ',' << row.metrics.lc_tag_accuracy << "\n";
    }
    std::cout << "wrote " << path << "\n";
    return 0;
}

int cmd_sweep_sigma(const CliOptions& opt) {
    for (double s : opt.sigmas) {
        if (s < 0.0 || s > 1.0) {
            throw ConfigError("sweep sigma " + std::to_string(s) + " outside [0, 1]");
        }
    }
    LoadedData d = load_encoded(opt);
    std::mt19937_64 embed_rng(opt.config.seed);
    auto [embedding, pretrained] = embeddings_for(opt, d.vocab, embed_rng);
    auto points =
        eval::sigma_sweep(opt.config, d.vocab, embedding, pretrained, d.train, d.test, opt.sigmas);

    std::cout << "sigma  accuracy  macro_f1\n" << std::fixed << std::setprecision(4);
    for (const auto& p : points) {
        std::cout << p.sigma << "   " << p.accuracy << "    " << p.macro_f1 << "\n";
    }
    std::cout << std::defaultfloat << std::setprecision(6);

    std::string path = metrics_csv_path(opt, "sweep-sigma");
    std::ofstream out(path, std::ios::binary);
    out << "sigma,accuracy,macro_f1\n" << std::setprecision(17);
    for (const auto& p : points) {
        out << p.sigma << ',' << p.accuracy << ',' << p.macro_f1 << "\n";
    }
    std::cout << "wrote " << path << "\n";
    return 0;
}

int cmd_predict(const CliOptions& opt) {
    if (opt.checkpoint.empty()) throw ConfigError("predict needs --checkpoint");
    train::Checkpoint ckpt = train::load_checkpoint(opt.checkpoint);
    echo_config(ckpt.config, "");
    model::Prediction pred =
        model::predict(ckpt.params, ckpt.config, ckpt.vocab, opt.sentence, opt.target);
    std::cout << "polarity: " << corpus::polarity_name(pred.polarity) << "\n";
    std::cout << "tokens (pred/gold LC-tag):\n";
    for (std::size_t i = 0; i < pred.tokens.size(); ++i) {
        std::cout << "  " << std::left << std::setw(18) << pred.tokens[i] << std::right
                  << pred.predicted_tags[i] << " / " << pred.gold_tags[i]
                  << (pred.predicted_tags[i] == pred.gold_tags[i] ? "" : "  x") << "\n";
    }
    return 0;
}

int cmd_export_attention(const CliOptions& opt) {
    if (opt.checkpoint.empty()) throw ConfigError("export-attention needs --checkpoint");
    train::Checkpoint ckpt = train::load_checkpoint(opt.checkpoint);
    echo_config(ckpt.config, "");
    std::string path = opt.output.empty() ? "attention.csv" : opt.output;
    eval::export_attention(ckpt, opt.sentence, opt.target, path);
    std::cout << "wrote " << path << "\n";
    return 0;
}

void add_model_flags(CLI::App* cmd, CliOptions& opt) {
    cmd->add_option("--d_h", opt.config.d_h, "hidden size");
    cmd->add_option("--heads", opt.config.heads, "attention heads");
    cmd->add_option("--dropout", opt.config.dropout, "dropout rate")
        ->check(CLI::Range(0.0, 0.999));
    cmd->add_option("--pad_len", opt.config.pad_len, "padding length");
    cmd->add_option("--alpha", opt.config.alpha, "SRD threshold (default per dataset: 5, 3, 5)")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--sigma", opt.config.sigma, "LCP loss weight")->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--lambda", opt.config.lambda, "L2 weight");
    cmd->add_option("--learning_rate", opt.config.learning_rate, "Adam learning rate");
    cmd->add_option("--batch_size", opt.config.batch_size, "mini-batch size");
    cmd->add_option("--epochs", opt.config.epochs, "training epochs");
    cmd->add_option("--lce_mode", opt.lce_mode, "LCE injection: dot | additive | off");
    cmd->add_option("--lcp_enabled", opt.config.lcp_enabled, "train the LC-tag head");
    cmd->add_option("--cdm_enabled", opt.config.cdm_enabled, "mask non-local features");
    cmd->add_option("--pooling", opt.pooling, "polarity pooling: mean | first");
    cmd->add_option("--seed", opt.config.seed, "seed for every random choice");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"local context-aware target sentiment classifier"};
    app.require_subcommand(1);

    CliOptions opt;
    if (const char* env = std::getenv("LCA_DATA_DIR")) opt.data_dir = env;

    auto add_common = [&](CLI::App* cmd, bool needs_dataset) {
        if (needs_dataset) {
            cmd->add_option("--dataset", opt.dataset, "laptop | restaurant | twitter")
                ->required()
                ->check(CLI::IsMember({"laptop", "restaurant", "twitter"}));
        }
        cmd->add_option("--data-dir", opt.data_dir,
                        "corpus directory (env LCA_DATA_DIR overrides the default)");
        cmd->add_option("--out-dir", opt.out_dir, "directory for metric files");
        cmd->add_option("--config", opt.config_path,
                        "flat key=value configuration file (flags take precedence)");
        add_model_flags(cmd, opt);
        return cmd;
    };

    CLI::App* ingest = add_common(app.add_subcommand("ingest", "parse a dataset and print class counts"), true);
    CLI::App* train_cmd = add_common(app.add_subcommand("train", "train and checkpoint a model"), true);
    train_cmd->add_option("--vectors", opt.vectors, "pretrained 300-d vectors (token v1..vd per line)");
    train_cmd->add_option("--checkpoint", opt.checkpoint, "checkpoint output path");
    CLI::App* eval_cmd = add_common(app.add_subcommand("eval", "evaluate a checkpoint on a test split"), true);
    eval_cmd->add_option("--checkpoint", opt.checkpoint, "checkpoint to evaluate")->required();
    CLI::App* ablate = add_common(app.add_subcommand("ablate", "train ablated variants"), true);
    ablate->add_option("--vectors", opt.vectors, "pretrained vectors");
    ablate->add_option("--variants", opt.variants, "subset of full,no_lce,no_lcp,no_cdm,plain")
        ->delimiter(',');
    CLI::App* sweep = add_common(app.add_subcommand("sweep-sigma", "train across sigma values"), true);
    sweep->add_option("--vectors", opt.vectors, "pretrained vectors");
    sweep->add_option("--sigmas", opt.sigmas, "sigma grid")->delimiter(',');

    CLI::App* predict = app.add_subcommand("predict", "classify one sentence/target pair");
    predict->add_option("--checkpoint", opt.checkpoint, "trained checkpoint")->required();
    predict->add_option("--sentence", opt.sentence, "input sentence")->required();
    predict->add_option("--target", opt.target, "target term (must occur in the sentence)")
        ->required();

    CLI::App* exporter = app.add_subcommand("export-attention", "dump per-token attention mass");
    exporter->add_option("--checkpoint", opt.checkpoint, "trained checkpoint")->required();
    exporter->add_option("--sentence", opt.sentence, "input sentence")->required();
    exporter->add_option("--target", opt.target, "target term")->required();
    exporter->add_option("--output", opt.output, "output csv path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);  // usage errors exit 1..2 with the offending token
    }

    try {
        for (CLI::App* cmd : {ingest, train_cmd, eval_cmd, ablate, sweep}) {
            if (cmd->parsed()) {
                opt.alpha_given = cmd->count("--alpha") > 0;
                apply_config_file(cmd, opt);
            }
        }
        // predict/export/eval run under the checkpoint's configuration and
        // echo that instead
        if (!predict->parsed() && !exporter->parsed() && !eval_cmd->parsed()) {
            resolve_enums(opt);
            echo_config(opt.config, opt.dataset);
        }

        if (ingest->parsed()) return cmd_ingest(opt);
        if (train_cmd->parsed()) return cmd_train(opt);
        if (eval_cmd->parsed()) return cmd_eval(opt);
        if (ablate->parsed()) return cmd_ablate(opt);
        if (sweep->parsed()) return cmd_sweep_sigma(opt);
        if (predict->parsed()) return cmd_predict(opt);
        if (exporter->parsed()) return cmd_export_attention(opt);
        std::cerr << "no command\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 9;
    }
}
