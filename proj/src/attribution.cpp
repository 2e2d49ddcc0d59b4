#include "bookmem/attribution.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <stdexcept>

namespace bookmem {

size_t locate_target_excerpt(size_t book_start, size_t book_end,
                             const std::vector<Excerpt>& excerpts) {
    if (excerpts.empty()) throw std::invalid_argument("book has no excerpts");
    size_t best = 0, best_overlap = 0;
    for (const auto& e : excerpts) {
        const size_t lo = std::max(book_start, e.word_start);
        const size_t hi = std::min(book_end, e.word_end);
        const size_t overlap = hi > lo ? hi - lo : 0;
        if (overlap > best_overlap) { // strict: earlier excerpt wins ties
            best_overlap = overlap;
            best = e.excerpt_id;
        }
    }
    return best;
}

CrossParagraphResult cross_paragraph_ratio(const TokenizedBook& book,
                                           const std::vector<Generation>& generations, size_t k,
                                           size_t min_span_words, const std::string& model_id,
                                           const std::string& setting) {
    if (min_span_words < k) throw std::invalid_argument("min_span_words must be >= k");
    const BookIndex index(book, k);

    struct Collected {
        size_t start, end, source;
    };
    std::vector<Collected> collected;
    for (const auto& g : generations)
        for (const auto& span : index.find_contiguous_matches(g.words))
            if (span.length() > min_span_words)
                collected.push_back({span.book_start, span.book_end, g.excerpt_id});

    // Containment removal precedes dedup: a contained span's sources do not
    // transfer to the span that shadows it.
    auto contained_in_larger = [&](const Collected& c) {
        for (const auto& o : collected) {
            if (o.end - o.start <= c.end - c.start) continue;
            if (o.start <= c.start && c.end <= o.end) return true;
        }
        return false;
    };
    std::map<std::pair<size_t, size_t>, std::set<size_t>> unique; // span -> sources
    for (const auto& c : collected)
        if (!contained_in_larger(c)) unique[{c.start, c.end}].insert(c.source);

    CrossParagraphResult result;
    size_t n_cross = 0;
    for (const auto& [span, sources] : unique) {
        SpanEvidence ev;
        ev.book_start = span.first;
        ev.book_end = span.second;
        ev.source_excerpts = sources;
        ev.target_excerpt = locate_target_excerpt(span.first, span.second, book.excerpts);
        ev.is_cross = std::any_of(sources.begin(), sources.end(),
                                  [&](size_t s) { return s != ev.target_excerpt; });
        ev.model_id = model_id;
        ev.setting = setting;
        if (ev.is_cross) ++n_cross;
        result.evidence.push_back(std::move(ev));
    }
    result.ratio = result.evidence.empty()
                       ? 0.0
                       : static_cast<double>(n_cross) / static_cast<double>(result.evidence.size());
    return result;
}

double cosine_similarity(const EmbeddingVector& u, const EmbeddingVector& v) {
    if (u.size() != v.size()) throw std::invalid_argument("embedding dimension mismatch");
    double dot = 0, nu = 0, nv = 0;
    for (size_t i = 0; i < u.size(); ++i) {
        dot += u[i] * v[i];
        nu += u[i] * u[i];
        nv += v[i] * v[i];
    }
    if (nu == 0.0 || nv == 0.0) throw std::invalid_argument("zero-norm embedding");
    return dot / (std::sqrt(nu) * std::sqrt(nv));
}

std::string distance_bin_label(size_t source, size_t target) {
    const size_t d = source > target ? source - target : target - source;
    if (d <= 5) return "1-5";
    if (d <= 20) return "6-20";
    if (d <= 50) return "21-50";
    return "51+";
}

namespace {

// Average rank of excerpt `target` when excerpts are ordered by descending
// similarity to the source prompt; rank 1 = most similar.
double average_rank(const std::vector<double>& sims, size_t target) {
    const double s = sims[target];
    size_t higher = 0, tied = 0;
    for (double x : sims) {
        if (x > s) ++higher;
        if (x == s) ++tied;
    }
    return static_cast<double>(higher) + (static_cast<double>(tied) + 1.0) / 2.0;
}

RankSummaryRow summarize(const std::string& group, const std::vector<const RankRecord*>& recs) {
    RankSummaryRow row;
    row.group = group;
    row.n = recs.size();
    for (const auto* r : recs) {
        row.mean_rank += r->rank_percentile;
        if (r->top_decile) row.top10_rate += 1.0;
    }
    if (!recs.empty()) {
        row.mean_rank /= static_cast<double>(recs.size());
        row.top10_rate /= static_cast<double>(recs.size());
    }
    return row;
}

} // namespace

SemanticRankAnalysis semantic_rank_analysis(const std::vector<SpanEvidence>& evidence,
                                            const std::vector<EmbeddingVector>& prompt_embeddings,
                                            const std::vector<EmbeddingVector>& excerpt_embeddings,
                                            uint64_t seed, const std::string& book_id) {
    const size_t n = excerpt_embeddings.size();
    if (n < 2) throw std::invalid_argument("book too small to rank");
    if (prompt_embeddings.size() != n)
        throw std::invalid_argument("prompt/excerpt embedding count mismatch");

    // Deduplicate cross pairs by (source, target); keep grouping labels from
    // the first occurrence.
    struct Pair {
        size_t source, target;
        std::string model_id, setting;
    };
    std::map<std::pair<size_t, size_t>, Pair> pairs;
    for (const auto& ev : evidence) {
        if (!ev.is_cross) continue;
        for (size_t src : ev.source_excerpts) {
            if (src == ev.target_excerpt) continue;
            pairs.emplace(std::make_pair(src, ev.target_excerpt),
                          Pair{src, ev.target_excerpt, ev.model_id, ev.setting});
        }
    }

    SemanticRankAnalysis out;
    std::vector<RankRecord> baseline_records;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<size_t> pick(0, n - 1);

    for (const auto& [key, p] : pairs) {
        if (p.source >= n)
            throw std::out_of_range("evidence references unknown excerpt " + std::to_string(p.source));
        std::vector<double> sims(n);
        for (size_t t = 0; t < n; ++t)
            sims[t] = cosine_similarity(prompt_embeddings[p.source], excerpt_embeddings[t]);

        auto make_record = [&](size_t target) {
            RankRecord r;
            r.book_id = book_id;
            r.source_excerpt = p.source;
            r.target_excerpt = target;
            const double rank = average_rank(sims, target);
            r.rank_percentile = 1.0 - (rank - 1.0) / static_cast<double>(n - 1);
            r.top_decile = r.rank_percentile >= 0.9;
            r.distance_bin = distance_bin_label(p.source, target);
            return r;
        };
        out.records.push_back(make_record(p.target));
        baseline_records.push_back(make_record(pick(rng))); // one draw per pair, pair order
    }

    std::map<std::string, std::vector<const RankRecord*>> by_model, by_setting, by_bin;
    std::vector<const RankRecord*> all, base;
    for (size_t i = 0; i < out.records.size(); ++i) {
        const RankRecord* r = &out.records[i];
        all.push_back(r);
        by_bin[r->distance_bin].push_back(r);
        auto it = pairs.find({r->source_excerpt, r->target_excerpt});
        if (it != pairs.end()) {
            if (!it->second.model_id.empty()) by_model[it->second.model_id].push_back(r);
            if (!it->second.setting.empty()) by_setting[it->second.setting].push_back(r);
        }
        base.push_back(&baseline_records[i]);
    }

    out.rows.push_back(summarize("overall", all));
    for (const auto& [m, v] : by_model) out.rows.push_back(summarize("model:" + m, v));
    for (const auto& [s, v] : by_setting) out.rows.push_back(summarize("setting:" + s, v));
    for (const char* bin : {"1-5", "6-20", "21-50", "51+"})
        if (by_bin.count(bin)) out.rows.push_back(summarize(std::string("distance:") + bin, by_bin[bin]));
    out.rows.push_back(summarize("random-baseline", base));
    return out;
}

} // namespace bookmem
