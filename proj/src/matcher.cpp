#include "bookmem/matcher.hpp"

#include <algorithm>

#include "bookmem/kernels.hpp"

namespace bookmem {

namespace {

constexpr uint32_t kUnknown = 0xFFFFFFFFu; // generation word absent from the book

constexpr uint64_t kHashMul = 0x9E3779B97F4A7C15ull;

uint64_t kgram_hash(const uint32_t* ids, size_t k) {
    uint64_t h = 0xCBF29CE484222325ull;
    for (size_t i = 0; i < k; ++i) h = (h ^ ids[i]) * kHashMul;
    return h;
}

} // namespace

BookIndex::BookIndex(const std::vector<std::string>& book_words, size_t k) : k_(k) {
    if (k_ == 0) throw std::invalid_argument("k must be >= 1");
    book_ids_.reserve(book_words.size());
    for (const auto& w : book_words) {
        auto [it, inserted] = vocab_.emplace(w, static_cast<uint32_t>(vocab_.size()));
        book_ids_.push_back(it->second);
    }
    if (book_ids_.size() >= k_) {
        seeds_.reserve(book_ids_.size());
        for (size_t j = 0; j + k_ <= book_ids_.size(); ++j)
            seeds_[kgram_hash(book_ids_.data() + j, k_)].push_back(static_cast<uint32_t>(j));
    }
}

std::vector<uint32_t> BookIndex::intern(const std::vector<std::string>& words) const {
    std::vector<uint32_t> ids;
    ids.reserve(words.size());
    for (const auto& w : words) {
        const auto it = vocab_.find(w);
        ids.push_back(it == vocab_.end() ? kUnknown : it->second);
    }
    return ids;
}

std::vector<MatchSpan> BookIndex::find_contiguous_matches(
    const std::vector<std::string>& gen_words) const {
    std::vector<MatchSpan> out;
    if (gen_words.size() < k_ || book_ids_.size() < k_) return out;
    const std::vector<uint32_t> gen_ids = intern(gen_words);

    for (size_t i = 0; i + k_ <= gen_ids.size(); ++i) {
        const auto it = seeds_.find(kgram_hash(gen_ids.data() + i, k_));
        if (it == seeds_.end()) continue;
        for (const uint32_t j : it->second) {
            // Only seed at run starts; interior seeds repeat the same run.
            if (i > 0 && j > 0 && gen_ids[i - 1] == book_ids_[j - 1]) continue;
            const size_t limit = std::min(gen_ids.size() - i, book_ids_.size() - j);
            const size_t len = kernels::common_prefix(gen_ids.data() + i, book_ids_.data() + j, limit);
            if (len >= k_) out.push_back({j, j + len, i, i + len});
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<MatchSpan> find_contiguous_matches(const std::vector<std::string>& gen_words,
                                               const TokenizedBook& book, size_t k) {
    return BookIndex(book, k).find_contiguous_matches(gen_words);
}

std::vector<MatchSpan> brute_force_matches(const std::vector<std::string>& gen_words,
                                           const std::vector<std::string>& book_words, size_t k) {
    std::vector<MatchSpan> out;
    if (k == 0) throw std::invalid_argument("k must be >= 1");
    const size_t ng = gen_words.size(), nb = book_words.size();
    // Walk every alignment diagonal, collecting maximal equal runs.
    auto walk = [&](size_t gi0, size_t bi0) {
        size_t g = gi0, b = bi0, run = 0;
        while (g < ng && b < nb) {
            if (gen_words[g] == book_words[b]) {
                ++run;
            } else {
                if (run >= k) out.push_back({b - run, b, g - run, g});
                run = 0;
            }
            ++g;
            ++b;
        }
        if (run >= k) out.push_back({b - run, b, g - run, g});
    };
    for (size_t gi0 = 0; gi0 < ng; ++gi0) walk(gi0, 0);
    for (size_t bi0 = 1; bi0 < nb; ++bi0) walk(0, bi0);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<std::pair<size_t, size_t>> greedy_select_nonoverlapping(
    std::vector<std::pair<size_t, size_t>> spans, size_t max_n) {
    std::sort(spans.begin(), spans.end(), [](const auto& a, const auto& b) {
        const size_t la = a.second - a.first, lb = b.second - b.first;
        if (la != lb) return la > lb;
        return a.first < b.first;
    });
    spans.erase(std::unique(spans.begin(), spans.end()), spans.end());
    std::vector<std::pair<size_t, size_t>> picked;
    for (const auto& s : spans) {
        if (picked.size() >= max_n) break;
        bool overlaps = false;
        for (const auto& p : picked) {
            if (s.first < p.second && p.first < s.second) {
                overlaps = true;
                break;
            }
        }
        if (!overlaps) picked.push_back(s);
    }
    return picked;
}

} // namespace bookmem
