#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include "bookmem/coverage.hpp"
#include "bookmem/matcher.hpp"

namespace bookmem {

using EmbeddingVector = std::vector<double>;

// One unique extracted book span with the excerpts whose prompts produced it.
struct SpanEvidence {
    size_t book_start = 0;
    size_t book_end = 0;
    std::set<size_t> source_excerpts;
    size_t target_excerpt = 0; // excerpt where the span lies
    bool is_cross = false;     // some source differs from the target
    std::string model_id;      // optional grouping label
    std::string setting;       // optional grouping label
};

struct CrossParagraphResult {
    double ratio = 0.0; // |cross| / |unique spans|, 0 when no spans
    std::vector<SpanEvidence> evidence;
};

// The excerpt with maximal word overlap with [book_start, book_end); ties
// break toward the earlier excerpt.
size_t locate_target_excerpt(size_t book_start, size_t book_end,
                             const std::vector<Excerpt>& excerpts);

// Cross-paragraph span ratio: collect all maximal matches longer than
// min_span_words with their prompting excerpt, drop spans fully contained in
// a strictly larger span, merge identical book spans (unioning sources),
// locate each span's excerpt, and report the cross fraction.
CrossParagraphResult cross_paragraph_ratio(const TokenizedBook& book,
                                           const std::vector<Generation>& generations, size_t k,
                                           size_t min_span_words = 20,
                                           const std::string& model_id = "",
                                           const std::string& setting = "");

double cosine_similarity(const EmbeddingVector& u, const EmbeddingVector& v);

struct RankRecord {
    std::string book_id;
    size_t source_excerpt = 0;
    size_t target_excerpt = 0;
    double rank_percentile = 0.0; // 1.0 = most similar, ties average-ranked
    bool top_decile = false;      // rank_percentile >= 0.9
    std::string distance_bin;     // "1-5", "6-20", "21-50", "51+"
};

struct RankSummaryRow {
    std::string group;
    size_t n = 0;
    double mean_rank = 0.0; // mean rank percentile
    double top10_rate = 0.0;
};

struct SemanticRankAnalysis {
    std::vector<RankRecord> records; // deduplicated cross pairs, in pair order
    std::vector<RankSummaryRow> rows; // overall, per-model, per-setting, per-bin, baseline
};

std::string distance_bin_label(size_t source, size_t target);

// Ranks each deduplicated cross pair's target excerpt among all excerpts by
// cosine similarity to the source prompt (rank 1 = most similar; tied
// similarities get the average rank of the tied block). rank_percentile =
// 1 - (rank-1)/(N-1). A seeded random baseline draws one uniform excerpt
// per pair under the same similarity distribution.
SemanticRankAnalysis semantic_rank_analysis(const std::vector<SpanEvidence>& evidence,
                                            const std::vector<EmbeddingVector>& prompt_embeddings,
                                            const std::vector<EmbeddingVector>& excerpt_embeddings,
                                            uint64_t seed, const std::string& book_id = "");

} // namespace bookmem
