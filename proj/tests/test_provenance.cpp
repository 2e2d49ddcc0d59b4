#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <sstream>

#include "bookmem/provenance.hpp"

using namespace bookmem;

namespace {

TokenizedBook word_book(size_t n) {
    RawBook raw;
    raw.book_id = "b";
    std::ostringstream os;
    for (size_t i = 0; i < n; ++i) {
        if (i) os << ' ';
        os << "w" << i;
    }
    raw.text = os.str();
    return tokenize(raw, NormalizationProfile::exact());
}

MatchSpan span(size_t lo, size_t hi) { return {lo, hi, 0, hi - lo}; }

} // namespace

TEST_CASE("select_top_spans: longest-first prefix when disjoint") {
    const auto picked = select_top_spans({span(0, 30), span(40, 65), span(70, 90)}, 2);
    REQUIRE(picked.size() == 2);
    CHECK(picked[0] == std::pair<size_t, size_t>{0, 30});
    CHECK(picked[1] == std::pair<size_t, size_t>{40, 65});
}

TEST_CASE("select_top_spans: contained candidate rejected") {
    const auto picked = select_top_spans({span(10, 40), span(15, 30)}, 50);
    REQUIRE(picked.size() == 1);
    CHECK(picked[0] == std::pair<size_t, size_t>{10, 40});
}

TEST_CASE("select_top_spans: empty input, and n >= 1 enforced") {
    CHECK(select_top_spans({}, 5).empty());
    CHECK_THROWS_AS(select_top_spans({span(0, 10)}, 0), std::invalid_argument);
}

TEST_CASE("mock corpus: exact and soft modes") {
    MockCorpus corpus;
    corpus.add_document("the quick brown fox jumps");
    CHECK(corpus.count(MatchMode::exact, "quick brown") == 1);
    CHECK(corpus.count(MatchMode::exact, "Quick, brown") == 0);
    CHECK(corpus.count(MatchMode::soft, "Quick, brown") == 1);
    CHECK_THROWS_AS(corpus.count(MatchMode::exact, ""), std::invalid_argument);
}

TEST_CASE("search_span: curly-quote variant found only under soft match") {
    MockCorpus corpus;
    corpus.add_document("she said “nothing ever changes here” and left");
    ProvenanceQuery exact;
    exact.mode = MatchMode::exact;
    exact.text = "said \"nothing ever changes";
    ProvenanceQuery soft = exact;
    soft.mode = MatchMode::soft;
    soft.text = normalize_string(exact.text, NormalizationProfile::soft());
    CHECK_FALSE(search_span(corpus, exact).found);
    CHECK(search_span(corpus, soft).found);
}

TEST_CASE("exact-found implies soft-found on random span queries") {
    std::mt19937_64 rng(71);
    const auto book = word_book(400);
    MockCorpus corpus;
    // Corpus holds a few overlapping slices of the book plus noise.
    corpus.add_document(span_to_raw(book, 0, 150));
    corpus.add_document(span_to_raw(book, 100, 300));
    corpus.add_document("completely unrelated noise text");
    for (int t = 0; t < 200; ++t) {
        std::uniform_int_distribution<size_t> lo(0, 390), len(2, 10);
        const size_t s = lo(rng), e = std::min<size_t>(400, s + len(rng));
        if (e <= s + 1) continue;
        const auto exact = search_span(corpus, make_query(book, s, e, MatchMode::exact));
        const auto soft = search_span(corpus, make_query(book, s, e, MatchMode::soft));
        if (exact.found) CHECK(soft.found);
    }
}

TEST_CASE("absence report arithmetic on a hand-built result set") {
    std::vector<SpanSearchResult> results;
    // One bin [50,100): 10 spans, 4 found exact, 9 found soft.
    for (size_t i = 0; i < 10; ++i) {
        SpanSearchResult r;
        r.book_start = i * 100;
        r.book_end = i * 100 + 60;
        r.length = 60;
        r.exact_found = i < 4;
        r.soft_found = i < 9;
        results.push_back(r);
    }
    const auto report = absence_report(results, {50, 100, 150});
    REQUIRE(report.bins.size() == 5); // <50, 50-100, 100-150, 150+, overall
    const auto& bin = report.bins[1];
    CHECK(bin.label == "50-100");
    CHECK(bin.n_queried == 10);
    CHECK(bin.exact_absence_rate == doctest::Approx(0.6));
    CHECK(bin.soft_absence_rate == doctest::Approx(0.1));
    CHECK(report.bins.back().label == "overall");
    CHECK(report.bins.back().n_queried == 10);
}

TEST_CASE("absence report: all found gives zero rates; order-invariant") {
    std::vector<SpanSearchResult> results;
    for (size_t len : {55, 120, 180}) {
        SpanSearchResult r;
        r.length = len;
        r.exact_found = true;
        r.soft_found = true;
        results.push_back(r);
    }
    auto a = absence_report(results);
    std::reverse(results.begin(), results.end());
    auto b = absence_report(results);
    for (size_t i = 0; i < a.bins.size(); ++i) {
        CHECK(a.bins[i].exact_absence_rate == 0.0);
        CHECK(a.bins[i].n_queried == b.bins[i].n_queried);
    }
}

TEST_CASE("http corpus client round-trips through the mock server") {
    MockCorpus corpus;
    corpus.add_document("alpha beta gamma delta");
    auto server = MockServer::serve_corpus(corpus);
    RetryPolicy retry;
    retry.backoff_ms = 1;
    HttpCorpusClient client("127.0.0.1", server->port(), retry);
    CHECK(client.count(MatchMode::exact, "beta gamma") == 1);
    CHECK(client.count(MatchMode::exact, "beta delta") == 0);
    CHECK(client.count(MatchMode::soft, "Beta, GAMMA") == 1);

    SUBCASE("transient 5xx failures are retried") {
        corpus.fail_next(2);
        CHECK(client.count(MatchMode::exact, "beta gamma") == 1);
    }
    SUBCASE("persistent failure surfaces as ProviderError") {
        corpus.fail_next(100);
        CHECK_THROWS_AS(client.count(MatchMode::exact, "beta gamma"), ProviderError);
    }
}
