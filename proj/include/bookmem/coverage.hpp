#pragma once

#include <cstddef>
#include <string>
#include <unordered_set>
#include <vector>

#include "bookmem/mask.hpp"
#include "bookmem/matcher.hpp"

namespace bookmem {

struct BmcConfig {
    size_t k = 5;                    // minimum match length in words
    size_t m = 5;                    // instruction-trimming n-gram order
    size_t samples_per_excerpt = 100;
    size_t span_count_threshold = 20; // span-count statistic cutoff
    size_t threads = 1;
};

// One excerpt's finetuning instruction (the prompt the model saw).
struct PromptRecord {
    size_t excerpt_id = 0;
    std::string instruction;
    size_t target_word_count = 0;
    std::string author;
    std::string summary;
};

struct BmcReport {
    std::string book_id;
    std::string model_id;
    double bmc = 0.0;
    size_t longest_block_words = 0;        // longest run of 1s in the mask
    size_t longest_regurgitated_words = 0; // longest single-generation match, untrimmed
    size_t n_spans_over_threshold = 0;     // distinct non-overlapping spans > threshold
    CoverageMask mask;
};

// Precomputed m-gram membership set for one instruction.
class InstructionGrams {
  public:
    InstructionGrams() = default;
    InstructionGrams(const std::vector<std::string>& instruction_words, size_t m);

    size_t m() const { return m_; }
    bool empty() const { return grams_.empty(); }
    bool contains(const std::vector<std::string>& words, size_t pos) const;

  private:
    size_t m_ = 0;
    std::unordered_set<std::string> grams_;
};

// Removes every book-side position of the span covered by a length-m window
// whose words also occur as a contiguous m-gram in the instruction, then
// returns the remaining maximal sub-spans (unfiltered; callers keep >= k).
std::vector<std::pair<size_t, size_t>> trim_instruction_overlap(const MatchSpan& span,
                                                                const std::vector<std::string>& book_words,
                                                                const InstructionGrams& instruction);

std::vector<std::pair<size_t, size_t>> trim_instruction_overlap(
    const MatchSpan& span, const std::vector<std::string>& book_words,
    const std::vector<std::string>& instruction_words, size_t m);

// Full coverage pass: match every generation against the whole book, trim
// against its excerpt's instruction, accumulate surviving sub-spans >= k
// into the mask, and compute the span statistics in the same sweep.
// Generations referencing an excerpt_id with no prompt and no excerpt are an
// error; zero generations yield a zero report.
BmcReport bmc(const TokenizedBook& book, const std::vector<PromptRecord>& prompts,
              const std::vector<Generation>& generations, const BmcConfig& config,
              const std::string& model_id = "");

// Longest single-generation maximal match (>= k), no trimming. 0 if none.
size_t longest_regurgitated_span(const std::vector<Generation>& generations,
                                 const TokenizedBook& book, size_t k);

// Count of distinct non-overlapping book spans longer than threshold across
// all generations, untrimmed, selected greedy longest-first.
size_t count_spans_over_threshold(const std::vector<Generation>& generations,
                                  const TokenizedBook& book, size_t k, size_t threshold = 20);

// Tokenizes each prompt's instruction under the profile and builds its
// m-gram set, indexed by excerpt_id.
std::vector<InstructionGrams> build_instruction_grams(const std::vector<PromptRecord>& prompts,
                                                      size_t n_excerpts,
                                                      const NormalizationProfile& profile, size_t m);

} // namespace bookmem
