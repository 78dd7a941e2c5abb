#include "lca/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "lca/errors.hpp"
#include "lca/local_context.hpp"

namespace lca::corpus {

const char* polarity_name(Polarity p) {
    switch (p) {
        case Polarity::negative: return "negative";
        case Polarity::neutral: return "neutral";
        case Polarity::positive: return "positive";
    }
    return "?";
}

// ---- tokenizer -------------------------------------------------------------

namespace {

bool is_word_byte(unsigned char c) {
    return std::isalnum(c) != 0 || c >= 0x80;  // keep UTF-8 sequences intact
}

bool is_space_byte(unsigned char c) { return c < 0x80 && std::isspace(c) != 0; }

}  // namespace

TokenSpans tokenize_with_spans(const std::string& text) {
    TokenSpans out;
    std::string current;
    std::size_t current_begin = 0;
    auto flush = [&](std::size_t end) {
        if (!current.empty()) {
            out.tokens.push_back(current);
            out.spans.emplace_back(current_begin, end);
            current.clear();
        }
    };
    for (std::size_t i = 0; i < text.size(); ++i) {
        unsigned char c = static_cast<unsigned char>(text[i]);
        if (is_space_byte(c)) {
            flush(i);
        } else if (is_word_byte(c)) {
            if (current.empty()) current_begin = i;
            current.push_back(static_cast<char>(std::tolower(c)));
        } else {
            flush(i);
            out.tokens.push_back(std::string(1, static_cast<char>(c)));
            out.spans.emplace_back(i, i + 1);
        }
    }
    flush(text.size());
    return out;
}

std::vector<std::string> tokenize(const std::string& text) {
    return tokenize_with_spans(text).tokens;
}

// ---- vocabulary ------------------------------------------------------------

Vocabulary::Vocabulary() {
    tokens_ = {"<pad>", "<unk>"};
    index_ = {{"<pad>", kPad}, {"<unk>", kUnk}};
}

int Vocabulary::add(const std::string& token) {
    auto it = index_.find(token);
    if (it != index_.end()) return it->second;
    int id = static_cast<int>(tokens_.size());
    tokens_.push_back(token);
    index_.emplace(token, id);
    return id;
}

int Vocabulary::lookup(const std::string& token) const {
    auto it = index_.find(token);
    return it == index_.end() ? kUnk : it->second;
}

const std::string& Vocabulary::token(int id) const {
    if (id < 0 || static_cast<std::size_t>(id) >= tokens_.size()) {
        throw IndexError("vocabulary id " + std::to_string(id) + " outside table of " +
                         std::to_string(tokens_.size()));
    }
    return tokens_[static_cast<std::size_t>(id)];
}

// ---- minimal XML reader ----------------------------------------------------

namespace {

struct XmlElement {
    std::string name;
    std::vector<std::pair<std::string, std::string>> attrs;
    std::vector<XmlElement> children;
    std::string text;
    std::size_t line = 1;

    const std::string* attr(const std::string& key) const {
        for (const auto& [k, v] : attrs) {
            if (k == key) return &v;
        }
        return nullptr;
    }
    const XmlElement* child(const std::string& child_name) const {
        for (const XmlElement& c : children) {
            if (c.name == child_name) return &c;
        }
        return nullptr;
    }
};

void append_utf8(std::string& out, unsigned long cp) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

// Decodes the five named entities and numeric references; an ampersand that
// starts no recognized entity passes through literally.
std::string decode_entities(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (raw[i] != '&') {
            out.push_back(raw[i]);
            continue;
        }
        std::size_t semi = raw.find(';', i + 1);
        if (semi == std::string_view::npos || semi - i > 10) {
            out.push_back('&');
            continue;
        }
        std::string_view name = raw.substr(i + 1, semi - i - 1);
        if (name == "lt") {
            out.push_back('<');
        } else if (name == "gt") {
            out.push_back('>');
        } else if (name == "amp") {
            out.push_back('&');
        } else if (name == "quot") {
            out.push_back('"');
        } else if (name == "apos") {
            out.push_back('\'');
        } else if (!name.empty() && name[0] == '#') {
            unsigned long cp = 0;
            bool ok = name.size() > 1;
            if (name.size() > 2 && (name[1] == 'x' || name[1] == 'X')) {
                for (std::size_t j = 2; j < name.size() && ok; ++j) {
                    char c = name[j];
                    int d = c >= '0' && c <= '9'   ? c - '0'
                            : c >= 'a' && c <= 'f' ? c - 'a' + 10
                            : c >= 'A' && c <= 'F' ? c - 'A' + 10
                                                   : -1;
                    if (d < 0) ok = false;
                    else cp = cp * 16 + static_cast<unsigned long>(d);
                }
            } else {
                for (std::size_t j = 1; j < name.size() && ok; ++j) {
                    if (name[j] < '0' || name[j] > '9') ok = false;
                    else cp = cp * 10 + static_cast<unsigned long>(name[j] - '0');
                }
            }
            if (!ok) {
                out.push_back('&');
                continue;
            }
            append_utf8(out, cp);
        } else {
            out.push_back('&');
            continue;
        }
        i = semi;
    }
    return out;
}

class XmlReader {
public:
    explicit XmlReader(const std::string& bytes) : s_(bytes) {
        if (s_.size() >= 3 && s_.compare(0, 3, "\xEF\xBB\xBF") == 0) pos_ = 3;  // BOM
    }

    XmlElement parse_document() {
        skip_misc();
        if (eof() || peek() != '<') throw ParseError(line_, "expected a root element");
        XmlElement root = parse_element();
        skip_misc();
        if (!eof()) throw ParseError(line_, "content after the root element");
        return root;
    }

private:
    const std::string& s_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;

    bool eof() const { return pos_ >= s_.size(); }
    char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
    void advance(std::size_t n = 1) {
        for (std::size_t i = 0; i < n && pos_ < s_.size(); ++i, ++pos_) {
            if (s_[pos_] == '\n') ++line_;
        }
    }
    void advance_to(std::size_t target) { advance(target - pos_); }
    bool starts_with(std::string_view prefix) const {
        return s_.compare(pos_, prefix.size(), prefix) == 0;
    }
    void skip_until(std::string_view terminator, const char* what) {
        std::size_t at = s_.find(terminator, pos_);
        if (at == std::string::npos) throw ParseError(line_, std::string("unterminated ") + what);
        advance_to(at + terminator.size());
    }
    void skip_whitespace() {
        while (!eof() && is_space_byte(static_cast<unsigned char>(peek()))) advance();
    }
    // whitespace, declarations/PIs and comments between elements
    void skip_misc() {
        for (;;) {
            skip_whitespace();
            if (starts_with("<?")) skip_until("?>", "processing instruction");
            else if (starts_with("<!--")) skip_until("-->", "comment");
            else if (starts_with("<!DOCTYPE")) skip_until(">", "doctype");
            else return;
        }
    }

    std::string read_name() {
        std::size_t start = pos_;
        while (!eof()) {
            char c = peek();
            if (is_space_byte(static_cast<unsigned char>(c)) || c == '>' || c == '/' || c == '=')
                break;
            advance();
        }
        if (pos_ == start) throw ParseError(line_, "expected a name");
        return s_.substr(start, pos_ - start);
    }

    XmlElement parse_element() {
        XmlElement el;
        el.line = line_;
        advance();  // '<'
        el.name = read_name();
        for (;;) {
            skip_whitespace();
            if (eof()) throw ParseError(line_, "unterminated tag <" + el.name + ">");
            if (peek() == '/') {
                advance();
                if (peek() != '>') throw ParseError(line_, "malformed self-closing tag");
                advance();
                return el;
            }
            if (peek() == '>') {
                advance();
                break;
            }
            std::string key = read_name();
            skip_whitespace();
            if (peek() != '=') throw ParseError(line_, "attribute '" + key + "' without value");
            advance();
            skip_whitespace();
            char quote = peek();
            if (quote != '"' && quote != '\'') {
                throw ParseError(line_, "attribute '" + key + "' value must be quoted");
            }
            advance();
            std::size_t vstart = pos_;
            std::size_t vend = s_.find(quote, vstart);
            if (vend == std::string::npos) {
                throw ParseError(line_, "unterminated attribute value for '" + key + "'");
            }
            std::string_view raw = std::string_view(s_).substr(vstart, vend - vstart);
            advance_to(vend + 1);
            el.attrs.emplace_back(std::move(key), decode_entities(raw));
        }
        // content
        for (;;) {
            if (eof()) throw ParseError(line_, "unterminated element <" + el.name + ">");
            if (peek() == '<') {
                if (starts_with("</")) {
                    std::size_t close_line = line_;
                    advance(2);
                    std::string closing = read_name();
                    skip_whitespace();
                    if (peek() != '>') throw ParseError(line_, "malformed closing tag");
                    advance();
                    if (closing != el.name) {
                        throw ParseError(close_line, "closing tag </" + closing +
                                                         "> does not match <" + el.name + ">");
                    }
                    return el;
                }
                if (starts_with("<!--")) {
                    skip_until("-->", "comment");
                    continue;
                }
                if (starts_with("<?")) {
                    skip_until("?>", "processing instruction");
                    continue;
                }
                el.children.push_back(parse_element());
            } else {
                std::size_t start = pos_;
                while (!eof() && peek() != '<') advance();
                el.text += decode_entities(std::string_view(s_).substr(start, pos_ - start));
            }
        }
    }
};

// byte offset of each code point, plus one-past-the-end
std::vector<std::size_t> codepoint_starts(const std::string& s) {
    std::vector<std::size_t> starts;
    starts.reserve(s.size() + 1);
    for (std::size_t i = 0; i < s.size(); ++i) {
        if ((static_cast<unsigned char>(s[i]) & 0xC0) != 0x80) starts.push_back(i);
    }
    starts.push_back(s.size());
    return starts;
}

std::optional<Polarity> polarity_from_label(const std::string& label) {
    if (label == "positive") return Polarity::positive;
    if (label == "negative") return Polarity::negative;
    if (label == "neutral") return Polarity::neutral;
    return std::nullopt;
}

}  // namespace

std::vector<RawExample> parse_semeval_xml(const std::string& bytes) {
    XmlElement root = XmlReader(bytes).parse_document();
    if (root.name != "sentences") {
        throw ParseError(root.line, "expected <sentences> root, got <" + root.name + ">");
    }
    std::vector<RawExample> out;
    for (const XmlElement& sentence : root.children) {
        if (sentence.name != "sentence") continue;
        const XmlElement* text_el = sentence.child("text");
        if (!text_el) throw ParseError(sentence.line, "<sentence> without <text>");
        const std::string& text = text_el->text;
        const XmlElement* terms = sentence.child("aspectTerms");
        if (!terms) continue;

        TokenSpans ts = tokenize_with_spans(text);
        std::vector<std::size_t> cp = codepoint_starts(text);
        for (const XmlElement& term : terms->children) {
            if (term.name != "aspectTerm") continue;
            const std::string* term_attr = term.attr("term");
            const std::string* pol_attr = term.attr("polarity");
            const std::string* from_attr = term.attr("from");
            const std::string* to_attr = term.attr("to");
            if (!term_attr || !pol_attr || !from_attr || !to_attr) {
                throw ParseError(term.line,
                                 "<aspectTerm> needs term, polarity, from and to attributes");
            }
            if (*pol_attr == "conflict") continue;  // outside the three-class task
            auto polarity = polarity_from_label(*pol_attr);
            if (!polarity) {
                throw ParseError(term.line, "unknown polarity '" + *pol_attr + "'");
            }
            char* endp = nullptr;
            long from_cp = std::strtol(from_attr->c_str(), &endp, 10);
            bool from_ok = endp && *endp == '\0';
            long to_cp = std::strtol(to_attr->c_str(), &endp, 10);
            bool to_ok = endp && *endp == '\0';
            if (!from_ok || !to_ok || from_cp < 0 || to_cp <= from_cp) {
                throw ParseError(term.line, "bad offsets from='" + *from_attr + "' to='" +
                                                *to_attr + "' for term '" + *term_attr + "'");
            }
            std::size_t from_b =
                cp[std::min<std::size_t>(static_cast<std::size_t>(from_cp), cp.size() - 1)];
            std::size_t to_b =
                cp[std::min<std::size_t>(static_cast<std::size_t>(to_cp), cp.size() - 1)];
            // smallest token range covering [from_b, to_b)
            std::size_t first = ts.tokens.size(), last = 0;
            for (std::size_t t = 0; t < ts.tokens.size(); ++t) {
                auto [b, e] = ts.spans[t];
                if (b < to_b && e > from_b) {
                    first = std::min(first, t);
                    last = std::max(last, t);
                }
            }
            if (first == ts.tokens.size()) {
                throw ParseError(term.line, "offsets [" + std::to_string(from_cp) + ", " +
                                                std::to_string(to_cp) + ") of term '" +
                                                *term_attr + "' cover no token");
            }
            RawExample ex;
            ex.tokens = ts.tokens;
            ex.target_begin = first;
            ex.target_end = last + 1;
            ex.polarity = *polarity;
            out.push_back(std::move(ex));
        }
    }
    return out;
}

std::vector<RawExample> parse_twitter(const std::string& bytes) {
    std::vector<std::string> lines;
    std::string current;
    for (char c : bytes) {
        if (c == '\n') {
            lines.push_back(current);
            current.clear();
        } else if (c != '\r') {
            current.push_back(c);
        }
    }
    if (!current.empty()) lines.push_back(current);
    while (!lines.empty() && lines.back().empty()) lines.pop_back();
    if (lines.size() % 3 != 0) {
        throw FormatError("twitter corpus has " + std::to_string(lines.size()) +
                          " lines, not a multiple of 3 (dangling lines)");
    }

    auto trim = [](const std::string& s) {
        std::size_t b = s.find_first_not_of(" \t");
        std::size_t e = s.find_last_not_of(" \t");
        return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
    };

    std::vector<RawExample> out;
    out.reserve(lines.size() / 3);
    for (std::size_t i = 0; i + 3 <= lines.size(); i += 3) {
        const std::size_t index = i / 3;
        const std::string& sentence = lines[i];
        const std::string target = trim(lines[i + 1]);
        const std::string pol = trim(lines[i + 2]);

        std::size_t at = sentence.find("$T$");
        if (at == std::string::npos) {
            throw FormatError("twitter example " + std::to_string(index) +
                              ": sentence has no $T$ placeholder");
        }
        std::vector<std::string> left = tokenize(sentence.substr(0, at));
        std::vector<std::string> mid = tokenize(target);
        std::vector<std::string> right = tokenize(sentence.substr(at + 3));
        if (mid.empty()) {
            throw FormatError("twitter example " + std::to_string(index) + ": empty target");
        }

        RawExample ex;
        ex.tokens = std::move(left);
        ex.target_begin = ex.tokens.size();
        ex.tokens.insert(ex.tokens.end(), mid.begin(), mid.end());
        ex.target_end = ex.tokens.size();
        ex.tokens.insert(ex.tokens.end(), right.begin(), right.end());

        if (pol == "-1") ex.polarity = Polarity::negative;
        else if (pol == "0") ex.polarity = Polarity::neutral;
        else if (pol == "1") ex.polarity = Polarity::positive;
        else {
            throw FormatError("twitter example " + std::to_string(index) + ": polarity '" + pol +
                              "' not in {-1, 0, 1}");
        }
        out.push_back(std::move(ex));
    }
    return out;
}

// ---- pretrained vectors ------------------------------------------------

EmbeddingLoadResult load_pretrained_vectors(const std::string& path, const Vocabulary& vocab,
                                            std::size_t dim, std::mt19937_64& rng) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open vectors file '" + path + "'");

    EmbeddingLoadResult result;
    result.matrix = Tensor::zeros({vocab.size(), dim});
    std::vector<double>& m = result.matrix.values_mut();
    std::vector<char> seen(vocab.size(), 0);

    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::size_t sp = line.find(' ');
        if (sp == std::string::npos) {
            throw FormatError("vectors file '" + path + "' line " + std::to_string(line_no) +
                              ": no values after token");
        }
        const std::string word = line.substr(0, sp);
        const int id = vocab.lookup(word);
        const bool wanted = id != Vocabulary::kUnk || word == vocab.token(Vocabulary::kUnk);
        if (!wanted && line_no > 1) continue;  // still dimension-check the first line

        const char* p = line.c_str() + sp;
        std::size_t count = 0;
        double* row = wanted ? m.data() + static_cast<std::size_t>(id) * dim : nullptr;
        while (*p) {
            char* next = nullptr;
            double v = std::strtod(p, &next);
            if (next == p) break;
            if (row && count < dim) row[count] = v;
            ++count;
            p = next;
        }
        if (count != dim) {
            throw FormatError("vectors file '" + path + "' line " + std::to_string(line_no) +
                              ": expected " + std::to_string(dim) + " values, found " +
                              std::to_string(count));
        }
        if (wanted && id != Vocabulary::kPad) seen[static_cast<std::size_t>(id)] = 1;
    }

    std::uniform_real_distribution<double> oov(-0.25, 0.25);
    for (std::size_t id = 1; id < vocab.size(); ++id) {
        if (seen[id]) {
            ++result.hits;
        } else {
            ++result.misses;
            for (std::size_t j = 0; j < dim; ++j) m[id * dim + j] = oov(rng);
        }
    }
    // padding row stays zero regardless of file content
    std::fill_n(m.begin(), dim, 0.0);
    return result;
}

Tensor random_embeddings(const Vocabulary& vocab, std::size_t dim, std::mt19937_64& rng) {
    Tensor t = Tensor::uniform({vocab.size(), dim}, -0.25, 0.25, rng);
    std::fill_n(t.values_mut().begin(), dim, 0.0);
    return t;
}

// ---- encoding ------------------------------------------------------------

EncodedExample encode(const RawExample& example, const Vocabulary& vocab, std::size_t pad_len) {
    const std::size_t n = example.tokens.size();
    const std::size_t span_len = example.target_end - example.target_begin;
    if (example.target_end <= example.target_begin || example.target_end > n) {
        throw ContractError("encode: target span [" + std::to_string(example.target_begin) +
                            ", " + std::to_string(example.target_end) + ") invalid for " +
                            std::to_string(n) + " tokens");
    }
    if (span_len > pad_len) {
        throw FormatError("encode: target of " + std::to_string(span_len) +
                          " tokens cannot fit padding length " + std::to_string(pad_len));
    }

    std::size_t start = 0;
    if (n > pad_len) {
        // keep a window centered on the target
        std::size_t center = (example.target_begin + example.target_end) / 2;
        start = center > pad_len / 2 ? center - pad_len / 2 : 0;
        start = std::min(start, n - pad_len);
        if (example.target_begin < start) start = example.target_begin;
        if (example.target_end > start + pad_len) start = example.target_end - pad_len;
    }

    EncodedExample out;
    out.valid_len = std::min(n - start, pad_len);
    out.ids.assign(pad_len, Vocabulary::kPad);
    for (std::size_t i = 0; i < out.valid_len; ++i) {
        out.ids[i] = vocab.lookup(example.tokens[start + i]);
    }
    out.target_begin = example.target_begin - start;
    out.target_end = example.target_end - start;
    out.polarity = example.polarity;
    return out;
}

void attach_lc_tags(std::vector<EncodedExample>& examples, int alpha, std::size_t pad_len) {
    for (EncodedExample& ex : examples) {
        ex.lc_tags =
            lctx::lc_tags(ex.valid_len, {ex.target_begin, ex.target_end}, alpha, pad_len).tags;
    }
}

// ---- dataset assembly ------------------------------------------------------

const char* dataset_name(DatasetId id) {
    switch (id) {
        case DatasetId::laptop: return "laptop";
        case DatasetId::restaurant: return "restaurant";
        case DatasetId::twitter: return "twitter";
    }
    return "?";
}

std::optional<DatasetId> dataset_from_name(const std::string& name) {
    if (name == "laptop") return DatasetId::laptop;
    if (name == "restaurant") return DatasetId::restaurant;
    if (name == "twitter") return DatasetId::twitter;
    return std::nullopt;
}

int default_alpha(DatasetId id) { return id == DatasetId::restaurant ? 3 : 5; }

SplitCounts count_polarities(const std::vector<RawExample>& examples) {
    SplitCounts c;
    for (const RawExample& ex : examples) {
        switch (ex.polarity) {
            case Polarity::positive: ++c.positive; break;
            case Polarity::negative: ++c.negative; break;
            case Polarity::neutral: ++c.neutral; break;
        }
    }
    return c;
}

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

const std::vector<std::string>& split_candidates(DatasetId id, bool train) {
    static const std::vector<std::string> laptop_train = {
        "Laptop_Train_v2.xml", "Laptops_Train_v2.xml", "Laptops_Train.xml", "laptop_train.xml"};
    static const std::vector<std::string> laptop_test = {
        "Laptops_Test_Gold.xml", "Laptop_Test_Gold.xml", "laptop_test.xml"};
    static const std::vector<std::string> rest_train = {
        "Restaurants_Train_v2.xml", "Restaurants_Train.xml", "restaurant_train.xml"};
    static const std::vector<std::string> rest_test = {
        "Restaurants_Test_Gold.xml", "restaurant_test.xml"};
    static const std::vector<std::string> twitter_train = {
        "twitter_train.raw", "train.raw", "acl-14-short-data/train.raw", "twitter_train.txt"};
    static const std::vector<std::string> twitter_test = {
        "twitter_test.raw", "test.raw", "acl-14-short-data/test.raw", "twitter_test.txt"};
    switch (id) {
        case DatasetId::laptop: return train ? laptop_train : laptop_test;
        case DatasetId::restaurant: return train ? rest_train : rest_test;
        case DatasetId::twitter: return train ? twitter_train : twitter_test;
    }
    return laptop_train;
}

}  // namespace

std::optional<std::string> find_split_file(const std::string& data_dir, DatasetId id, bool train) {
    for (const std::string& name : split_candidates(id, train)) {
        std::filesystem::path p = std::filesystem::path(data_dir) / name;
        std::error_code ec;
        if (std::filesystem::exists(p, ec)) return p.string();
    }
    return std::nullopt;
}

Corpus load_dataset(const std::string& data_dir, DatasetId id) {
    auto train_path = find_split_file(data_dir, id, true);
    auto test_path = find_split_file(data_dir, id, false);
    if (!train_path || !test_path) {
        const bool missing_train = !train_path;
        std::string names;
        for (const std::string& n : split_candidates(id, missing_train)) {
            if (!names.empty()) names += ", ";
            names += n;
        }
        throw IoError("no " + std::string(missing_train ? "train" : "test") + " split for " +
                      dataset_name(id) + " under '" + data_dir + "' (tried: " + names + ")");
    }
    Corpus corpus;
    if (id == DatasetId::twitter) {
        corpus.train = parse_twitter(read_file(*train_path));
        corpus.test = parse_twitter(read_file(*test_path));
    } else {
        corpus.train = parse_semeval_xml(read_file(*train_path));
        corpus.test = parse_semeval_xml(read_file(*test_path));
    }
    return corpus;
}

Vocabulary build_vocabulary(const Corpus& corpus) {
    Vocabulary vocab;
    for (const auto* split : {&corpus.train, &corpus.test}) {
        for (const RawExample& ex : *split) {
            for (const std::string& tok : ex.tokens) vocab.add(tok);
        }
    }
    return vocab;
}

}  // namespace lca::corpus
