#include <doctest.h>

#include <random>

#include "lca/corpus.hpp"
#include "lca/local_context.hpp"
#include "lca/ops.hpp"

using namespace lca;
using lctx::Span;

namespace {

// Literal re-evaluation of the tag rule: positions enumerate the sentence,
// the distance |i - mean(target)| - floor(m/2) is compared against alpha.
std::vector<int> brute_force_tags(std::size_t valid_len, Span target, int alpha,
                                  std::size_t pad_len) {
    std::vector<int> tags(pad_len, 0);
    double mean = 0.0;
    for (std::size_t p = target.begin; p < target.end; ++p) mean += static_cast<double>(p);
    mean /= static_cast<double>(target.length());
    double half = std::floor(static_cast<double>(target.length()) / 2.0);
    for (std::size_t i = 0; i < valid_len && i < pad_len; ++i) {
        double d = std::fabs(static_cast<double>(i) - mean) - half;
        tags[i] = d <= static_cast<double>(alpha) ? 1 : 0;
    }
    return tags;
}

}  // namespace

TEST_SUITE_BEGIN("local_context");

TEST_CASE("srd hand evaluations") {
    CHECK(lctx::srd(3, {3, 4}) == 0.0);
    CHECK(lctx::srd(1, {4, 6}) == doctest::Approx(2.5).epsilon(1e-15));
    CHECK(lctx::srd(0, {4, 6}) == doctest::Approx(3.5).epsilon(1e-15));
    CHECK_THROWS_AS(lctx::srd(0, {2, 2}), ContractError);
}

TEST_CASE("keyboard sentence tags the expected local context at alpha 3") {
    auto tokens = corpus::tokenize("It feels cheap, the keyboard is not very sensitive.");
    REQUIRE(tokens.size() == 11);
    CHECK(tokens[5] == "keyboard");
    auto tags = lctx::lc_tags(11, {5, 6}, 3, 80);
    std::vector<std::string> local;
    for (std::size_t i = 0; i < 11; ++i) {
        if (tags.tags[i]) local.push_back(tokens[i]);
    }
    CHECK(local == std::vector<std::string>{"cheap", ",", "the", "keyboard", "is", "not", "very"});
    for (std::size_t i = 11; i < 80; ++i) CHECK(tags.tags[i] == 0);
}

TEST_CASE("large alpha tags every valid position") {
    auto tags = lctx::lc_tags(7, {2, 3}, 7, 10);
    for (std::size_t i = 0; i < 7; ++i) CHECK(tags.tags[i] == 1);
    for (std::size_t i = 7; i < 10; ++i) CHECK(tags.tags[i] == 0);
}

TEST_CASE("alpha zero tags only a mid-sentence single-token target") {
    auto tags = lctx::lc_tags(9, {4, 5}, 0, 12);
    for (std::size_t i = 0; i < 9; ++i) CHECK(tags.tags[i] == (i == 4 ? 1 : 0));
}

TEST_CASE("tags are monotone in alpha and symmetric for single-token targets") {
    std::mt19937_64 rng(21);
    for (int rep = 0; rep < 200; ++rep) {
        std::size_t valid = 1 + rng() % 12;
        std::size_t b = rng() % valid;
        std::size_t e = b + 1 + rng() % (valid - b);
        int alpha = static_cast<int>(rng() % 6);
        auto lo = lctx::lc_tags(valid, {b, e}, alpha, 16);
        auto hi = lctx::lc_tags(valid, {b, e}, alpha + 1 + static_cast<int>(rng() % 3), 16);
        for (std::size_t i = 0; i < 16; ++i) {
            if (lo.tags[i]) CHECK(hi.tags[i] == 1);
        }
        if (e == b + 1) {
            for (std::size_t i = 0; i < valid; ++i) {
                std::size_t mirror = 2 * b >= i ? 2 * b - i : valid;  // reflect around b
                if (mirror < valid) CHECK(lo.tags[i] == lo.tags[mirror]);
            }
        }
    }
}

TEST_CASE("tags match the brute-force rule on every short sentence and span") {
    std::mt19937_64 rng(22);
    for (std::size_t valid = 1; valid <= 12; ++valid) {
        for (std::size_t b = 0; b < valid; ++b) {
            for (std::size_t e = b + 1; e <= valid; ++e) {
                int alpha = static_cast<int>(rng() % 8);
                auto got = lctx::lc_tags(valid, {b, e}, alpha, 14);
                CHECK(got.tags == brute_force_tags(valid, {b, e}, alpha, 14));
            }
        }
    }
}

TEST_CASE("cdm mask rows follow the tags") {
    lctx::LcTagVector all1{std::vector<int>(4, 1), 3};
    auto m1 = lctx::cdm_mask(all1, 3);
    for (double v : m1.values) CHECK(v == 1.0);

    lctx::LcTagVector all0{std::vector<int>(4, 0), 3};
    auto m0 = lctx::cdm_mask(all0, 3);
    for (double v : m0.values) CHECK(v == 0.0);

    lctx::LcTagVector mixed{{1, 0, 1}, 0};
    auto mm = lctx::cdm_mask(mixed, 2);
    CHECK(mm.values == std::vector<double>{1, 1, 0, 0, 1, 1});
}

TEST_CASE("apply_mask keeps local rows bit-exact and zeroes the rest") {
    std::mt19937_64 rng(23);
    Tensor x = Tensor::uniform({2, 4}, -2.0, 2.0, rng, true);
    lctx::LcTagVector tags{{1, 0}, 0};
    auto mask = lctx::cdm_mask(tags, 4);

    Tensor out = lctx::apply_mask(x, mask);
    for (std::size_t j = 0; j < 4; ++j) {
        CHECK(out(0, j) == x(0, j));
        CHECK(out(1, j) == 0.0);
    }
    // idempotent
    Tensor twice = lctx::apply_mask(out, mask);
    CHECK(twice.values() == out.values());

    // gradient through masked rows is exactly zero
    autograd::backward(sum(twice));
    for (std::size_t j = 0; j < 4; ++j) {
        CHECK(x.grad()[j] == 1.0);
        CHECK(x.grad()[4 + j] == 0.0);
    }

    lctx::MaskMatrix wrong;
    wrong.rows = 3;
    wrong.cols = 4;
    wrong.values.assign(12, 1.0);
    CHECK_THROWS_AS(lctx::apply_mask(x, wrong), ShapeError);
}

TEST_CASE("identity mask passes features through unchanged") {
    std::mt19937_64 rng(24);
    Tensor x = Tensor::uniform({3, 5}, -1.0, 1.0, rng);
    lctx::LcTagVector ones{std::vector<int>(3, 1), 9};
    Tensor out = lctx::apply_mask(x, lctx::cdm_mask(ones, 5));
    CHECK(out.values() == x.values());
}

TEST_SUITE_END();
