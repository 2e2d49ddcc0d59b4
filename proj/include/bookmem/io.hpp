#pragma once

#include <string>
#include <vector>

#include "bookmem/agreement.hpp"
#include "bookmem/attribution.hpp"
#include "bookmem/corpus.hpp"
#include "bookmem/coverage.hpp"
#include "bookmem/matcher.hpp"
#include "bookmem/provenance.hpp"

namespace bookmem::io {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

// Book input: UTF-8 plain text plus JSON sidecar {book_id, title, author}.
// A missing sidecar path yields a book with id derived from the file stem.
RawBook read_raw_book(const std::string& text_path, const std::string& sidecar_path = "");

// Tokenized-book artifact. Stores raw text, profile and excerpt ranges;
// words and offsets are re-derived on load.
void save_book(const TokenizedBook& book, const std::string& path);
TokenizedBook load_book(const std::string& path);

// Line-delimited JSON files.
void save_excerpts(const TokenizedBook& book, const std::string& path);
void save_prompts(const std::vector<PromptRecord>& prompts, const std::string& path);
std::vector<PromptRecord> load_prompts(const std::string& path);
void save_generations(const std::vector<Generation>& generations, const std::string& path);
std::vector<Generation> load_generations(const std::string& path, const NormalizationProfile& profile);
void save_match_spans(const std::vector<MatchSpan>& spans, const std::string& path);

// BmcReport JSON (mask embedded as run-length string).
void save_report(const BmcReport& report, size_t mask_bits, const std::string& path);
BmcReport load_report(const std::string& path);

void save_evidence(const CrossParagraphResult& result, const std::string& path);
CrossParagraphResult load_evidence(const std::string& path);

std::string rank_rows_csv(const std::vector<RankSummaryRow>& rows);
std::string absence_csv(const AbsenceReport& report);
std::string mask_pair_stats_json(const std::string& model_a, const std::string& model_b,
                                 const MaskPairStats& stats);

// CSV matrix of pairwise values, models as both header row and column.
std::string matrix_csv(const std::vector<std::string>& models,
                       const std::vector<std::vector<double>>& values);

// One bar per metric, SVG text output.
std::string metrics_bar_chart_svg(const BmcReport& report);

} // namespace bookmem::io
