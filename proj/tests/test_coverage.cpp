#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "bookmem/coverage.hpp"

using namespace bookmem;

namespace {

TokenizedBook book_from_words(const std::vector<std::string>& words, size_t excerpt_words = 0) {
    RawBook raw;
    raw.book_id = "b";
    std::ostringstream os;
    for (size_t i = 0; i < words.size(); ++i) {
        if (i) os << ' ';
        os << words[i];
    }
    raw.text = os.str();
    auto book = tokenize(raw, NormalizationProfile::exact());
    const size_t step = excerpt_words == 0 ? words.size() : excerpt_words;
    for (size_t s = 0; s < words.size(); s += step) {
        Excerpt e;
        e.excerpt_id = book.excerpts.size();
        e.word_start = s;
        e.word_end = std::min(words.size(), s + step);
        e.text = span_to_raw(book, e.word_start, e.word_end);
        book.excerpts.push_back(e);
    }
    return book;
}

std::vector<std::string> numbered_words(size_t n, const std::string& prefix = "w") {
    std::vector<std::string> out;
    for (size_t i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
    return out;
}

Generation make_gen(size_t excerpt_id, std::vector<std::string> words, size_t sample = 0) {
    Generation g;
    g.excerpt_id = excerpt_id;
    g.sample_idx = sample;
    g.model_id = "test";
    std::ostringstream os;
    for (size_t i = 0; i < words.size(); ++i) {
        if (i) os << ' ';
        os << words[i];
    }
    g.text = os.str();
    g.words = std::move(words);
    return g;
}

std::string join(const std::vector<std::string>& words, size_t lo, size_t hi) {
    std::ostringstream os;
    for (size_t i = lo; i < hi; ++i) {
        if (i > lo) os << ' ';
        os << words[i];
    }
    return os.str();
}

// Literal line-by-line execution of the coverage algorithm, brute force
// everywhere: all-window match enumeration, per-position m-gram marking.
CoverageMask oracle_mask(const TokenizedBook& book, const std::vector<PromptRecord>& prompts,
                         const std::vector<Generation>& generations, size_t k, size_t m) {
    CoverageMask covered(book.word_count());
    for (const auto& gen : generations) {
        std::vector<std::string> instr_words;
        for (const auto& p : prompts)
            if (p.excerpt_id == gen.excerpt_id)
                instr_words = normalize_words(p.instruction, book.profile);
        for (const auto& span : brute_force_matches(gen.words, book.words, k)) {
            std::vector<bool> keep(span.book_end - span.book_start, true);
            for (size_t w = span.book_start; w + m <= span.book_end; ++w) {
                bool in_instruction = false;
                for (size_t ip = 0; ip + m <= instr_words.size(); ++ip) {
                    bool eq = true;
                    for (size_t t = 0; t < m; ++t)
                        if (instr_words[ip + t] != book.words[w + t]) eq = false;
                    if (eq) in_instruction = true;
                }
                if (in_instruction)
                    for (size_t t = 0; t < m; ++t) keep[w + t - span.book_start] = false;
            }
            size_t i = 0;
            const size_t len = span.book_end - span.book_start;
            while (i < len) {
                if (!keep[i]) {
                    ++i;
                    continue;
                }
                size_t j = i;
                while (j < len && keep[j]) ++j;
                if (j - i >= k)
                    for (size_t t = i; t < j; ++t) covered.set(span.book_start + t);
                i = j;
            }
        }
    }
    return covered;
}

} // namespace

TEST_CASE("trimming: shared 5-gram splits a full-book span") {
    const auto words = numbered_words(20);
    const auto book = book_from_words(words);
    MatchSpan span{0, 20, 0, 20};
    const auto subs = trim_instruction_overlap(span, book.words,
                                               std::vector<std::string>(words.begin() + 6,
                                                                        words.begin() + 11),
                                               5);
    REQUIRE(subs.size() == 2);
    CHECK(subs[0] == std::pair<size_t, size_t>{0, 6});
    CHECK(subs[1] == std::pair<size_t, size_t>{11, 20});
}

TEST_CASE("trimming: empty instruction leaves the span unchanged") {
    const auto book = book_from_words(numbered_words(20));
    const auto subs = trim_instruction_overlap({5, 15, 0, 10}, book.words, InstructionGrams{});
    REQUIRE(subs.size() == 1);
    CHECK(subs[0] == std::pair<size_t, size_t>{5, 15});
}

TEST_CASE("bmc fixture: instruction 5-gram at [6,11) gives 0.75") {
    const auto words = numbered_words(20);
    const auto book = book_from_words(words);
    PromptRecord prompt;
    prompt.excerpt_id = 0;
    prompt.instruction = join(words, 6, 11);
    BmcConfig cfg;
    const auto report = bmc(book, {prompt}, {make_gen(0, words)}, cfg);
    CHECK(report.bmc == 0.75);
    CHECK(report.mask.popcount() == 15);
    CHECK(!report.mask.test(6));
    CHECK(report.mask.test(5));
    CHECK(report.mask.test(11));
}

TEST_CASE("bmc fixture: trimmed fragments below k are dropped") {
    const auto words = numbered_words(20);
    const auto book = book_from_words(words);
    PromptRecord prompt;
    prompt.excerpt_id = 0;
    prompt.instruction = join(words, 8, 13);
    // Generation reproduces book[5,15) only.
    const auto report = bmc(book, {prompt},
                            {make_gen(0, std::vector<std::string>(words.begin() + 5,
                                                                  words.begin() + 15))},
                            BmcConfig{});
    CHECK(report.bmc == 0.0);
    CHECK(report.longest_block_words == 0);
}

TEST_CASE("bmc: plain half-book match gives 0.5") {
    const auto words = numbered_words(20);
    const auto book = book_from_words(words);
    const auto report = bmc(book, {},
                            {make_gen(0, std::vector<std::string>(words.begin() + 5,
                                                                  words.begin() + 15))},
                            BmcConfig{});
    CHECK(report.bmc == 0.5);
    CHECK(report.longest_block_words == 10);
    CHECK(report.longest_regurgitated_words == 10);
}

TEST_CASE("bmc: identity generations reach 1.0") {
    const auto words = numbered_words(60);
    const auto book = book_from_words(words, 20);
    std::vector<Generation> gens;
    for (const auto& e : book.excerpts)
        gens.push_back(make_gen(e.excerpt_id,
                                std::vector<std::string>(words.begin() + e.word_start,
                                                         words.begin() + e.word_end)));
    const auto report = bmc(book, {}, gens, BmcConfig{});
    CHECK(report.bmc == 1.0);
    CHECK(report.longest_block_words == 60);
}

TEST_CASE("bmc: zero generations yield a zero report") {
    const auto book = book_from_words(numbered_words(20));
    const auto report = bmc(book, {}, {}, BmcConfig{});
    CHECK(report.bmc == 0.0);
    CHECK(report.mask.size() == 20);
}

TEST_CASE("bmc: unknown excerpt_id errors") {
    const auto book = book_from_words(numbered_words(20), 10);
    CHECK_THROWS_AS(bmc(book, {}, {make_gen(7, numbered_words(20))}, BmcConfig{}),
                    std::out_of_range);
}

TEST_CASE("longest_regurgitated_span picks the single longest match") {
    const auto words = numbered_words(60);
    const auto book = book_from_words(words);
    std::vector<Generation> gens;
    // One generation with a 12-word match, one with 7.
    auto g1 = std::vector<std::string>(words.begin() + 10, words.begin() + 22);
    g1.insert(g1.begin(), "zz1");
    auto g2 = std::vector<std::string>(words.begin() + 40, words.begin() + 47);
    gens.push_back(make_gen(0, g1));
    gens.push_back(make_gen(0, g2, 1));
    CHECK(longest_regurgitated_span(gens, book, 5) == 12);
    CHECK(longest_regurgitated_span({make_gen(0, {"a", "b"})}, book, 5) == 0);
}

TEST_CASE("count_spans_over_threshold dedups and rejects overlaps greedily") {
    const auto words = numbered_words(120);
    const auto book = book_from_words(words);
    auto slice = [&](size_t lo, size_t hi) {
        return std::vector<std::string>(words.begin() + lo, words.begin() + hi);
    };
    SUBCASE("disjoint spans count separately") {
        std::vector<Generation> gens{make_gen(0, slice(0, 25)), make_gen(0, slice(30, 55), 1)};
        CHECK(count_spans_over_threshold(gens, book, 5, 20) == 2);
    }
    SUBCASE("identical spans from different generations count once") {
        std::vector<Generation> gens{make_gen(0, slice(0, 25)), make_gen(0, slice(0, 25), 1)};
        CHECK(count_spans_over_threshold(gens, book, 5, 20) == 1);
    }
    SUBCASE("overlapping spans keep the longer one") {
        std::vector<Generation> gens{make_gen(0, slice(0, 25)), make_gen(0, slice(10, 40), 1)};
        CHECK(count_spans_over_threshold(gens, book, 5, 20) == 1);
    }
}

TEST_CASE("pipeline equals the literal algorithm on random instances") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 60; ++trial) {
        std::uniform_int_distribution<size_t> vocab_pick(0, 2);
        const size_t vocab = std::vector<size_t>{4, 20, 300}[vocab_pick(rng)];
        std::uniform_int_distribution<size_t> bl(30, 200), ng(1, 12), gl(5, 60), word(0, vocab - 1);
        std::vector<std::string> words;
        const size_t n = bl(rng);
        for (size_t i = 0; i < n; ++i) words.push_back("v" + std::to_string(word(rng)));
        const auto book = book_from_words(words, 40);

        // Instructions borrow real book 5-grams so trimming fires.
        std::vector<PromptRecord> prompts;
        for (const auto& e : book.excerpts) {
            PromptRecord p;
            p.excerpt_id = e.excerpt_id;
            if (rng() % 2 == 0 && book.word_count() >= 7) {
                std::uniform_int_distribution<size_t> at(0, book.word_count() - 7);
                const size_t s = at(rng);
                p.instruction = join(book.words, s, s + 7);
            }
            prompts.push_back(p);
        }

        std::vector<Generation> gens;
        const size_t n_gens = ng(rng);
        for (size_t i = 0; i < n_gens; ++i) {
            std::vector<std::string> gw;
            const size_t len = gl(rng);
            if (rng() % 3 == 0 && book.word_count() > len) {
                std::uniform_int_distribution<size_t> at(0, book.word_count() - len);
                const size_t s = at(rng);
                gw.assign(book.words.begin() + s, book.words.begin() + s + len);
            } else {
                for (size_t t = 0; t < len; ++t) gw.push_back("v" + std::to_string(word(rng)));
            }
            gens.push_back(make_gen(i % book.excerpts.size(), gw, i));
        }

        BmcConfig cfg;
        cfg.k = 3 + trial % 3;
        const auto report = bmc(book, prompts, gens, cfg);
        const auto expected = oracle_mask(book, prompts, gens, cfg.k, cfg.m);
        CHECK(report.mask == expected);
        CHECK(report.bmc ==
              static_cast<double>(expected.popcount()) / static_cast<double>(book.word_count()));
    }
}

TEST_CASE("order independence and monotonicity") {
    std::mt19937_64 rng(77);
    const auto words = numbered_words(100);
    const auto book = book_from_words(words, 25);
    std::vector<Generation> gens;
    for (size_t i = 0; i < 8; ++i) {
        std::uniform_int_distribution<size_t> at(0, 80), len(3, 20);
        const size_t s = at(rng), l = len(rng);
        gens.push_back(make_gen(i % 4, std::vector<std::string>(words.begin() + s,
                                                                words.begin() + std::min<size_t>(100, s + l)),
                                i));
    }
    BmcConfig cfg;
    const auto base = bmc(book, {}, gens, cfg);

    auto shuffled = gens;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const auto permuted = bmc(book, {}, shuffled, cfg);
    CHECK(base.mask == permuted.mask);
    CHECK(base.bmc == permuted.bmc);
    CHECK(base.n_spans_over_threshold == permuted.n_spans_over_threshold);

    // Adding generations only turns bits on; raising k only turns bits off.
    std::vector<Generation> prefix(gens.begin(), gens.begin() + 4);
    const auto partial = bmc(book, {}, prefix, cfg);
    for (size_t i = 0; i < base.mask.size(); ++i)
        if (partial.mask.test(i)) CHECK(base.mask.test(i));

    BmcConfig higher = cfg;
    higher.k = cfg.k + 2;
    const auto stricter = bmc(book, {}, gens, higher);
    CHECK(stricter.bmc <= base.bmc);
    for (size_t i = 0; i < base.mask.size(); ++i)
        if (stricter.mask.test(i)) CHECK(base.mask.test(i));
}

TEST_CASE("threaded scoring matches single-threaded") {
    const auto words = numbered_words(200);
    const auto book = book_from_words(words, 50);
    std::mt19937_64 rng(5);
    std::vector<Generation> gens;
    for (size_t i = 0; i < 24; ++i) {
        std::uniform_int_distribution<size_t> at(0, 170), len(4, 30);
        const size_t s = at(rng), l = len(rng);
        gens.push_back(make_gen(i % 4, std::vector<std::string>(words.begin() + s,
                                                                words.begin() + std::min<size_t>(200, s + l)),
                                i));
    }
    BmcConfig one, eight;
    eight.threads = 8;
    const auto a = bmc(book, {}, gens, one);
    const auto b = bmc(book, {}, gens, eight);
    CHECK(a.mask == b.mask);
    CHECK(a.bmc == b.bmc);
    CHECK(a.longest_regurgitated_words == b.longest_regurgitated_words);
    CHECK(a.n_spans_over_threshold == b.n_spans_over_threshold);
}
