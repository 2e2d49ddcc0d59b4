#include "bookmem/provenance.hpp"

#include <algorithm>
#include <stdexcept>

namespace bookmem {

std::vector<std::pair<size_t, size_t>> select_top_spans(const std::vector<MatchSpan>& matches,
                                                        size_t n) {
    if (n == 0) throw std::invalid_argument("select_top_spans: n must be >= 1");
    std::vector<std::pair<size_t, size_t>> spans;
    spans.reserve(matches.size());
    for (const auto& m : matches) spans.emplace_back(m.book_start, m.book_end);
    return greedy_select_nonoverlapping(std::move(spans), n);
}

ProvenanceQuery make_query(const TokenizedBook& book, size_t book_start, size_t book_end,
                           MatchMode mode) {
    ProvenanceQuery q;
    q.book_id = book.book_id;
    q.book_start = book_start;
    q.book_end = book_end;
    q.mode = mode;
    const std::string raw = span_to_raw(book, book_start, book_end);
    q.text = mode == MatchMode::soft ? normalize_string(raw, NormalizationProfile::soft()) : raw;
    return q;
}

SearchOutcome search_span(CorpusClient& client, const ProvenanceQuery& query) {
    if (query.text.empty()) throw std::invalid_argument("search_span: empty query text");
    SearchOutcome out;
    out.count = client.count(query.mode, query.text);
    out.found = out.count > 0;
    return out;
}

std::vector<SpanSearchResult> search_spans(CorpusClient& client, const TokenizedBook& book,
                                           const std::vector<std::pair<size_t, size_t>>& spans) {
    std::vector<SpanSearchResult> out;
    out.reserve(spans.size());
    for (const auto& [s, e] : spans) {
        SpanSearchResult r;
        r.book_start = s;
        r.book_end = e;
        r.length = e - s;
        const auto exact = search_span(client, make_query(book, s, e, MatchMode::exact));
        const auto soft = search_span(client, make_query(book, s, e, MatchMode::soft));
        r.exact_found = exact.found;
        r.exact_count = exact.count;
        r.soft_found = soft.found;
        r.soft_count = soft.count;
        out.push_back(r);
    }
    return out;
}

AbsenceReport absence_report(const std::vector<SpanSearchResult>& results,
                             const std::vector<size_t>& bin_edges, const std::string& book_id) {
    std::vector<size_t> edges = bin_edges;
    std::sort(edges.begin(), edges.end());

    AbsenceReport report;
    report.book_id = book_id;
    report.spans = results;
    std::sort(report.spans.begin(), report.spans.end(), [](const auto& a, const auto& b) {
        if (a.length != b.length) return a.length > b.length;
        return a.book_start < b.book_start;
    });

    auto add_bin = [&](const std::string& label, size_t lo, size_t hi) {
        AbsenceBin bin;
        bin.label = label;
        bin.lo = lo;
        bin.hi = hi;
        report.bins.push_back(bin);
    };
    if (!edges.empty() && edges.front() > 0)
        add_bin("<" + std::to_string(edges.front()), 0, edges.front());
    for (size_t i = 0; i < edges.size(); ++i) {
        const size_t lo = edges[i];
        const size_t hi = i + 1 < edges.size() ? edges[i + 1] : 0;
        add_bin(hi ? std::to_string(lo) + "-" + std::to_string(hi) : std::to_string(lo) + "+", lo, hi);
    }
    add_bin("overall", 0, 0);

    for (const auto& r : results) {
        for (auto& bin : report.bins) {
            const bool overall = bin.label == "overall";
            const bool in_range = r.length >= bin.lo && (bin.hi == 0 || r.length < bin.hi);
            if (!overall && !in_range) continue;
            ++bin.n_queried;
            if (!r.exact_found) ++bin.exact_absent;
            if (!r.soft_found) ++bin.soft_absent;
        }
    }
    for (auto& bin : report.bins) {
        if (bin.n_queried == 0) continue;
        bin.exact_absence_rate = static_cast<double>(bin.exact_absent) / bin.n_queried;
        bin.soft_absence_rate = static_cast<double>(bin.soft_absent) / bin.n_queried;
    }
    return report;
}

} // namespace bookmem
