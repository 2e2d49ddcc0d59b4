#include "bookmem/dataprep.hpp"

#include <fstream>
#include <random>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "bookmem/rng.hpp"

namespace bookmem {

using nlohmann::json;

size_t summary_response_count(const Excerpt& excerpt) {
    const size_t n = excerpt.word_end - excerpt.word_start;
    return (n + 1) / 2; // ceil(n / 2)
}

std::string build_summary_prompt(const Excerpt& excerpt) {
    if (excerpt.word_end <= excerpt.word_start)
        throw std::invalid_argument("build_summary_prompt: empty excerpt");
    return "Describe in detail (" + std::to_string(summary_response_count(excerpt)) +
           " words) what is happening in this excerpt. Mention the characters and whether the "
           "narration is primarily in the first or third person. Maintain the original sentence "
           "order while describing.\n\n" +
           excerpt.text;
}

std::string build_instruction(const std::string& summary, size_t word_count,
                              const std::string& author) {
    if (summary.empty() || author.empty() || word_count == 0)
        throw std::invalid_argument("build_instruction: empty field");
    return "Write a " + std::to_string(word_count) +
           " word paragraph about the content below emulating the style and voice of " + author +
           "\n\nContent: " + summary;
}

std::string summarize(TextProvider& provider, const Excerpt& excerpt) {
    try {
        return provider.complete(build_summary_prompt(excerpt), summary_response_count(excerpt));
    } catch (const ProviderError& e) {
        throw ProviderError("summarize failed for excerpt " + std::to_string(excerpt.excerpt_id) +
                            ": " + e.what());
    }
}

std::vector<PromptRecord> build_prompts(TextProvider& provider, const TokenizedBook& book) {
    if (book.excerpts.empty()) throw std::invalid_argument("build_prompts: book has no excerpts");
    std::vector<PromptRecord> prompts;
    prompts.reserve(book.excerpts.size());
    for (const auto& e : book.excerpts) {
        PromptRecord p;
        p.excerpt_id = e.excerpt_id;
        p.author = book.author;
        p.summary = summarize(provider, e);
        p.target_word_count = e.word_end - e.word_start;
        p.instruction = build_instruction(p.summary, p.target_word_count,
                                          book.author.empty() ? "Unknown" : book.author);
        prompts.push_back(std::move(p));
    }
    return prompts;
}

std::vector<FinetuneExample> make_finetune_examples(const std::vector<PromptRecord>& prompts,
                                                    const std::vector<Excerpt>& excerpts) {
    std::vector<FinetuneExample> out;
    out.reserve(excerpts.size());
    for (const auto& e : excerpts) {
        const PromptRecord* prompt = nullptr;
        for (const auto& p : prompts)
            if (p.excerpt_id == e.excerpt_id) {
                prompt = &p;
                break;
            }
        if (!prompt)
            throw std::invalid_argument("missing prompt for excerpt " +
                                        std::to_string(e.excerpt_id));
        out.push_back({prompt->instruction, e.text});
    }
    return out;
}

void export_finetune_dataset(const std::vector<PromptRecord>& prompts,
                             const std::vector<Excerpt>& excerpts, const std::string& path) {
    const auto examples = make_finetune_examples(prompts, excerpts);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    for (const auto& ex : examples)
        out << json{{"input", ex.input}, {"output", ex.output}}.dump() << '\n';
    if (!out) throw std::runtime_error("write failed: " + path);
}

SimulationResult simulate_generations(const TokenizedBook& book,
                                      const std::vector<PromptRecord>& prompts,
                                      const SimulatorConfig& config, size_t samples) {
    if (config.p_memorize < 0.0 || config.p_memorize > 1.0)
        throw std::invalid_argument("p_memorize must be in [0, 1]");
    if (book.excerpts.empty()) throw std::invalid_argument("simulate: book has no excerpts");
    for (const auto& w : config.filler_vocab)
        for (const auto& bw : book.words)
            if (w == bw)
                throw std::invalid_argument("filler vocabulary overlaps book vocabulary: " + w);

    SimulationResult result;
    for (const auto& excerpt : book.excerpts) {
        (void)prompts; // instructions affect scoring, not generation
        for (size_t t = 0; t < samples; ++t) {
            std::mt19937_64 rng(derive_seed(config.seed, excerpt.excerpt_id, t));
            const size_t ex_len = excerpt.word_end - excerpt.word_start;
            size_t replay = config.replay_len == 0 ? ex_len : std::min(config.replay_len, ex_len);

            Generation g;
            g.excerpt_id = excerpt.excerpt_id;
            g.sample_idx = t;
            g.model_id = config.model_id;
            PlantedSpan planted{excerpt.excerpt_id, t, 0, 0};

            std::uniform_real_distribution<double> coin(0.0, 1.0);
            if (coin(rng) < config.p_memorize) {
                std::uniform_int_distribution<size_t> start_at(0, ex_len - replay);
                const size_t s = excerpt.word_start + start_at(rng);
                planted.book_start = s;
                planted.book_end = s + replay;
                for (size_t w = s; w < s + replay; ++w) {
                    if (!g.text.empty()) g.text.push_back(' ');
                    g.text += book.words[w];
                }
            } else {
                std::uniform_int_distribution<size_t> pick(0, config.filler_vocab.size() - 1);
                for (size_t w = 0; w < replay; ++w) {
                    if (!g.text.empty()) g.text.push_back(' ');
                    g.text += config.filler_vocab[pick(rng)];
                }
            }
            g.words = normalize_words(g.text, book.profile);
            result.generations.push_back(std::move(g));
            result.planted.push_back(planted);
        }
    }
    return result;
}

} // namespace bookmem
