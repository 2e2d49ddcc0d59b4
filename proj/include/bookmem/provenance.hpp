#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "bookmem/corpus.hpp"
#include "bookmem/matcher.hpp"
#include "bookmem/providers.hpp"

namespace bookmem {

struct ProvenanceQuery {
    std::string book_id;
    size_t book_start = 0;
    size_t book_end = 0;
    MatchMode mode = MatchMode::exact;
    std::string text; // raw substring (exact) or soft-normalized form (soft)
};

struct SpanSearchResult {
    size_t book_start = 0;
    size_t book_end = 0;
    size_t length = 0; // words
    bool exact_found = false;
    bool soft_found = false;
    uint64_t exact_count = 0;
    uint64_t soft_count = 0;
};

struct AbsenceBin {
    std::string label;
    size_t lo = 0, hi = 0; // word-length range, hi==0 means unbounded
    size_t n_queried = 0;
    size_t exact_absent = 0;
    size_t soft_absent = 0;
    double exact_absence_rate = 0.0;
    double soft_absence_rate = 0.0;
};

struct AbsenceReport {
    std::string book_id;
    std::vector<AbsenceBin> bins; // ascending, plus an overall row last
    std::vector<SpanSearchResult> spans;
};

// Top-n longest distinct spans: greedy longest-first over book coordinates
// (ties: smaller start), overlap-free.
std::vector<std::pair<size_t, size_t>> select_top_spans(const std::vector<MatchSpan>& matches,
                                                        size_t n = 50);

ProvenanceQuery make_query(const TokenizedBook& book, size_t book_start, size_t book_end,
                           MatchMode mode);

struct SearchOutcome {
    bool found = false;
    uint64_t count = 0;
};

SearchOutcome search_span(CorpusClient& client, const ProvenanceQuery& query);

// Queries every span under both modes.
std::vector<SpanSearchResult> search_spans(CorpusClient& client, const TokenizedBook& book,
                                           const std::vector<std::pair<size_t, size_t>>& spans);

// Buckets results by word length at the given bin edges (default {50, 100,
// 150}: an underflow bin below the first edge, then half-open bins, the last
// unbounded) and computes per-mode absence rates plus an overall row.
AbsenceReport absence_report(const std::vector<SpanSearchResult>& results,
                             const std::vector<size_t>& bin_edges = {50, 100, 150},
                             const std::string& book_id = "");

} // namespace bookmem
