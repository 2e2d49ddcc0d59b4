#include "bookmem/coverage.hpp"

#include <algorithm>
#include <atomic>
#include <future>
#include <stdexcept>

namespace bookmem {

namespace {

std::string join_gram(const std::vector<std::string>& words, size_t pos, size_t m) {
    std::string g;
    for (size_t i = 0; i < m; ++i) {
        if (i) g.push_back('\x1f');
        g += words[pos + i];
    }
    return g;
}

} // namespace

InstructionGrams::InstructionGrams(const std::vector<std::string>& instruction_words, size_t m)
    : m_(m) {
    if (m_ == 0) throw std::invalid_argument("m must be >= 1");
    for (size_t i = 0; i + m_ <= instruction_words.size(); ++i)
        grams_.insert(join_gram(instruction_words, i, m_));
}

bool InstructionGrams::contains(const std::vector<std::string>& words, size_t pos) const {
    return grams_.count(join_gram(words, pos, m_)) > 0;
}

std::vector<std::pair<size_t, size_t>> trim_instruction_overlap(
    const MatchSpan& span, const std::vector<std::string>& book_words,
    const InstructionGrams& instruction) {
    const size_t s = span.book_start, e = span.book_end;
    if (instruction.empty()) return {{s, e}};
    const size_t m = instruction.m();
    std::vector<bool> removed(e - s, false);
    for (size_t w = s; w + m <= e; ++w) {
        if (instruction.contains(book_words, w))
            for (size_t p = w; p < w + m; ++p) removed[p - s] = true;
    }
    std::vector<std::pair<size_t, size_t>> out;
    size_t i = s;
    while (i < e) {
        if (removed[i - s]) {
            ++i;
            continue;
        }
        size_t j = i;
        while (j < e && !removed[j - s]) ++j;
        out.emplace_back(i, j);
        i = j;
    }
    return out;
}

std::vector<std::pair<size_t, size_t>> trim_instruction_overlap(
    const MatchSpan& span, const std::vector<std::string>& book_words,
    const std::vector<std::string>& instruction_words, size_t m) {
    return trim_instruction_overlap(span, book_words, InstructionGrams(instruction_words, m));
}

std::vector<InstructionGrams> build_instruction_grams(const std::vector<PromptRecord>& prompts,
                                                      size_t n_excerpts,
                                                      const NormalizationProfile& profile,
                                                      size_t m) {
    std::vector<InstructionGrams> grams(n_excerpts);
    for (const auto& p : prompts) {
        if (p.excerpt_id >= n_excerpts)
            throw std::out_of_range("prompt references unknown excerpt_id " +
                                    std::to_string(p.excerpt_id));
        grams[p.excerpt_id] = InstructionGrams(normalize_words(p.instruction, profile), m);
    }
    return grams;
}

namespace {

// Per-generation results, computed independently and merged in input order
// so the report is identical for any thread count.
struct GenResult {
    std::vector<std::pair<size_t, size_t>> surviving; // trimmed sub-spans >= k
    size_t longest_match = 0;
    std::vector<std::pair<size_t, size_t>> over_threshold; // untrimmed spans > threshold
};

GenResult score_generation(const Generation& gen, const BookIndex& index,
                           const std::vector<std::string>& book_words,
                           const InstructionGrams& instruction, const BmcConfig& config) {
    GenResult r;
    for (const MatchSpan& span : index.find_contiguous_matches(gen.words)) {
        r.longest_match = std::max(r.longest_match, span.length());
        if (span.length() > config.span_count_threshold)
            r.over_threshold.emplace_back(span.book_start, span.book_end);
        for (const auto& sub : trim_instruction_overlap(span, book_words, instruction))
            if (sub.second - sub.first >= config.k) r.surviving.push_back(sub);
    }
    return r;
}

template <typename Fn>
void parallel_for(size_t n, size_t threads, Fn&& fn) {
    if (threads <= 1 || n < 2) {
        for (size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<size_t> next{0};
    std::vector<std::future<void>> workers;
    const size_t n_workers = std::min(threads, n);
    for (size_t t = 0; t < n_workers; ++t) {
        workers.push_back(std::async(std::launch::async, [&] {
            for (size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
        }));
    }
    for (auto& w : workers) w.get();
}

} // namespace

BmcReport bmc(const TokenizedBook& book, const std::vector<PromptRecord>& prompts,
              const std::vector<Generation>& generations, const BmcConfig& config,
              const std::string& model_id) {
    const size_t n_excerpts = book.excerpts.empty() ? 1 : book.excerpts.size();
    for (const auto& g : generations)
        if (g.excerpt_id >= n_excerpts)
            throw std::out_of_range("generation references unknown excerpt_id " +
                                    std::to_string(g.excerpt_id));

    BmcReport report;
    report.book_id = book.book_id;
    report.model_id =
        !model_id.empty() ? model_id : (generations.empty() ? "" : generations.front().model_id);
    report.mask = CoverageMask(book.word_count());
    if (generations.empty()) return report; // zero report

    const auto grams = build_instruction_grams(prompts, n_excerpts, book.profile, config.m);
    const BookIndex index(book, config.k);

    std::vector<GenResult> results(generations.size());
    parallel_for(generations.size(), config.threads, [&](size_t i) {
        results[i] = score_generation(generations[i], index, book.words, grams[generations[i].excerpt_id],
                                      config);
    });

    std::vector<std::pair<size_t, size_t>> over_threshold;
    for (const auto& r : results) {
        report.longest_regurgitated_words = std::max(report.longest_regurgitated_words, r.longest_match);
        for (const auto& [s, e] : r.surviving) report.mask.set_range(s, e);
        over_threshold.insert(over_threshold.end(), r.over_threshold.begin(), r.over_threshold.end());
    }
    if (report.longest_regurgitated_words < config.k) report.longest_regurgitated_words = 0;
    report.n_spans_over_threshold = greedy_select_nonoverlapping(std::move(over_threshold)).size();
    report.bmc = static_cast<double>(report.mask.popcount()) / static_cast<double>(book.word_count());
    report.longest_block_words = report.mask.longest_run();
    return report;
}

size_t longest_regurgitated_span(const std::vector<Generation>& generations,
                                 const TokenizedBook& book, size_t k) {
    const BookIndex index(book, k);
    size_t best = 0;
    for (const auto& g : generations)
        for (const auto& span : index.find_contiguous_matches(g.words))
            best = std::max(best, span.length());
    return best;
}

size_t count_spans_over_threshold(const std::vector<Generation>& generations,
                                  const TokenizedBook& book, size_t k, size_t threshold) {
    if (threshold < k) throw std::invalid_argument("threshold must be >= k");
    const BookIndex index(book, k);
    std::vector<std::pair<size_t, size_t>> spans;
    for (const auto& g : generations)
        for (const auto& span : index.find_contiguous_matches(g.words))
            if (span.length() > threshold) spans.emplace_back(span.book_start, span.book_end);
    return greedy_select_nonoverlapping(std::move(spans)).size();
}

} // namespace bookmem
