#pragma once

#include <cstddef>
#include <optional>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "lca/tensor.hpp"

namespace lca::corpus {

enum class Polarity : int { negative = 0, neutral = 1, positive = 2 };

const char* polarity_name(Polarity p);

// One classification instance as parsed from a corpus file: lowercase
// tokens, the contiguous target span (half-open token indices) and the gold
// polarity.
struct RawExample {
    std::vector<std::string> tokens;
    std::size_t target_begin = 0;
    std::size_t target_end = 0;
    Polarity polarity = Polarity::neutral;
};

// The same instance after vocabulary encoding, padded/truncated to pad_len.
// lc_tags stay empty until attach_lc_tags() fills them for a concrete alpha.
struct EncodedExample {
    std::vector<int> ids;
    std::size_t valid_len = 0;
    std::size_t target_begin = 0;
    std::size_t target_end = 0;
    Polarity polarity = Polarity::neutral;
    std::vector<int> lc_tags;
};

// Token table with index 0 reserved for padding and 1 for unknown; ids >= 2
// follow first-occurrence order, so the table is deterministic for a fixed
// corpus.
class Vocabulary {
public:
    static constexpr int kPad = 0;
    static constexpr int kUnk = 1;

    Vocabulary();

    int add(const std::string& token);           // inserts if absent
    int lookup(const std::string& token) const;  // kUnk if absent
    std::size_t size() const { return tokens_.size(); }
    const std::string& token(int id) const;

private:
    std::unordered_map<std::string, int> index_;
    std::vector<std::string> tokens_;
};

// Lowercased tokens; runs of alphanumeric (or non-ASCII) bytes form one
// token, every other printable byte is its own token.
std::vector<std::string> tokenize(const std::string& text);

// Tokens plus their byte spans in the input, for character-offset alignment.
struct TokenSpans {
    std::vector<std::string> tokens;
    std::vector<std::pair<std::size_t, std::size_t>> spans;  // byte [begin, end)
};
TokenSpans tokenize_with_spans(const std::string& text);

// SemEval-2014 task-4 aspect-term XML (sentence/text/aspectTerms/aspectTerm
// with term, polarity, from, to attributes). "conflict" terms are dropped;
// character offsets expand to the smallest covering token range.
std::vector<RawExample> parse_semeval_xml(const std::string& bytes);

// Three-line-per-example format: sentence containing the placeholder $T$,
// target string, polarity in {-1, 0, 1}.
std::vector<RawExample> parse_twitter(const std::string& bytes);

struct EmbeddingLoadResult {
    Tensor matrix;           // |V| x dim, row 0 zero
    std::size_t hits = 0;    // vocabulary tokens found in the file
    std::size_t misses = 0;  // tokens initialized uniform(-0.25, 0.25)
    double coverage() const {
        std::size_t total = hits + misses;
        return total == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(total);
    }
};

// Reads a `token v1 ... vdim` text file and assembles the lookup matrix for
// the vocabulary. Out-of-vocabulary rows draw uniform(-0.25, 0.25) from rng;
// the padding row stays zero.
EmbeddingLoadResult load_pretrained_vectors(const std::string& path, const Vocabulary& vocab,
                                            std::size_t dim, std::mt19937_64& rng);

// Random fallback with the same conventions, for runs without a vectors file.
Tensor random_embeddings(const Vocabulary& vocab, std::size_t dim, std::mt19937_64& rng);

// Pads with id 0 or truncates to pad_len. Truncation keeps a window centered
// on the target so the span always survives; a target longer than pad_len is
// unrepresentable.
EncodedExample encode(const RawExample& example, const Vocabulary& vocab,
                      std::size_t pad_len = 80);

// Derived LC-tags (needs the dataset's alpha); see lca::lctx.
void attach_lc_tags(std::vector<EncodedExample>& examples, int alpha, std::size_t pad_len);

// ---- dataset assembly ----------------------------------------------------

enum class DatasetId { laptop, restaurant, twitter };

const char* dataset_name(DatasetId id);
std::optional<DatasetId> dataset_from_name(const std::string& name);
int default_alpha(DatasetId id);

struct SplitCounts {
    std::size_t positive = 0;
    std::size_t negative = 0;
    std::size_t neutral = 0;
    std::size_t total() const { return positive + negative + neutral; }
};
SplitCounts count_polarities(const std::vector<RawExample>& examples);

struct Corpus {
    std::vector<RawExample> train;
    std::vector<RawExample> test;
};

// Locates the split files for a dataset under data_dir (several conventional
// filenames are probed; see README) and parses both splits.
Corpus load_dataset(const std::string& data_dir, DatasetId id);
std::optional<std::string> find_split_file(const std::string& data_dir, DatasetId id, bool train);

// Vocabulary over train+test tokens (embedding rows are frozen, so test-only
// words are safe to include).
Vocabulary build_vocabulary(const Corpus& corpus);

}  // namespace lca::corpus
