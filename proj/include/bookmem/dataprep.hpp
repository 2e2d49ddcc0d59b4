#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bookmem/corpus.hpp"
#include "bookmem/coverage.hpp"
#include "bookmem/providers.hpp"

namespace bookmem {

// Finetuning pair: instruction in, excerpt raw text out.
struct FinetuneExample {
    std::string input;
    std::string output;
};

// Synthetic memorizing model. With probability p_memorize a sample replays
// book text verbatim (the whole excerpt, or a random contiguous sub-span of
// replay_len words); otherwise it emits filler from a vocabulary disjoint
// from the book. Fully seeded per (excerpt, sample).
struct SimulatorConfig {
    double p_memorize = 1.0;
    size_t replay_len = 0; // 0 = full excerpt
    std::vector<std::string> filler_vocab = {"zzfill0", "zzfill1", "zzfill2", "zzfill3"};
    uint64_t seed = 0;
    std::string model_id = "simulator";
};

// Book-side word spans actually replayed, per generation, recorded so tests
// can compute expected coverage without re-running the matcher.
struct PlantedSpan {
    size_t excerpt_id = 0;
    size_t sample_idx = 0;
    size_t book_start = 0;
    size_t book_end = 0; // empty span (0,0) for filler samples
};

struct SimulationResult {
    std::vector<Generation> generations;
    std::vector<PlantedSpan> planted;
};

// Prompt asking for a plot summary of the excerpt at half its word count
// (rounded up). Byte-stable.
std::string build_summary_prompt(const Excerpt& excerpt);

size_t summary_response_count(const Excerpt& excerpt);

// Finetuning instruction built from a summary, the excerpt's word count and
// the author name. Byte-stable; throws on empty fields or word_count == 0.
std::string build_instruction(const std::string& summary, size_t word_count,
                              const std::string& author);

// One summary per excerpt through the provider (mock or HTTP).
std::string summarize(TextProvider& provider, const Excerpt& excerpt);

// Full prompt build for a book: summarize each excerpt and render its
// instruction. Ordered by excerpt_id.
std::vector<PromptRecord> build_prompts(TextProvider& provider, const TokenizedBook& book);

std::vector<FinetuneExample> make_finetune_examples(const std::vector<PromptRecord>& prompts,
                                                    const std::vector<Excerpt>& excerpts);

// Line-delimited JSON {"input":..., "output":...}, one line per excerpt in
// excerpt order. Byte-stable across runs.
void export_finetune_dataset(const std::vector<PromptRecord>& prompts,
                             const std::vector<Excerpt>& excerpts, const std::string& path);

SimulationResult simulate_generations(const TokenizedBook& book,
                                      const std::vector<PromptRecord>& prompts,
                                      const SimulatorConfig& config, size_t samples = 100);

} // namespace bookmem
