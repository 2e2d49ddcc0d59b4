#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "bookmem/corpus.hpp"

namespace bookmem {

// One maximal contiguous verbatim match between a generation and the book.
// Maximal along its alignment diagonal: extending either end by one word
// breaks the match or exits bounds.
struct MatchSpan {
    size_t book_start = 0;
    size_t book_end = 0; // half-open
    size_t gen_start = 0;
    size_t gen_end = 0; // half-open

    size_t length() const { return book_end - book_start; }

    bool operator==(const MatchSpan& o) const {
        return book_start == o.book_start && book_end == o.book_end && gen_start == o.gen_start &&
               gen_end == o.gen_end;
    }
    bool operator<(const MatchSpan& o) const {
        if (gen_start != o.gen_start) return gen_start < o.gen_start;
        if (book_start != o.book_start) return book_start < o.book_start;
        if (gen_end != o.gen_end) return gen_end < o.gen_end;
        return book_end < o.book_end;
    }
};

struct Generation {
    size_t excerpt_id = 0;
    size_t sample_idx = 0;
    std::string model_id;
    std::string text;
    std::vector<std::string> words; // tokenized under the active profile
};

// Word-interned book with a k-gram seed index. Read-only after construction;
// safe to share across threads.
class BookIndex {
  public:
    BookIndex(const std::vector<std::string>& book_words, size_t k);
    BookIndex(const TokenizedBook& book, size_t k) : BookIndex(book.words, k) {}

    size_t k() const { return k_; }
    size_t book_size() const { return book_ids_.size(); }

    // Every maximal match of length >= k, all book-side occurrences included,
    // sorted by (gen_start, book_start).
    std::vector<MatchSpan> find_contiguous_matches(const std::vector<std::string>& gen_words) const;

  private:
    std::vector<uint32_t> intern(const std::vector<std::string>& words) const;

    size_t k_;
    std::unordered_map<std::string, uint32_t> vocab_;
    std::vector<uint32_t> book_ids_;
    std::unordered_map<uint64_t, std::vector<uint32_t>> seeds_; // k-gram hash -> start positions
};

std::vector<MatchSpan> find_contiguous_matches(const std::vector<std::string>& gen_words,
                                               const TokenizedBook& book, size_t k);

// Reference oracle: O(|g|*|B|) diagonal run-length scan. Same contract as
// find_contiguous_matches.
std::vector<MatchSpan> brute_force_matches(const std::vector<std::string>& gen_words,
                                           const std::vector<std::string>& book_words, size_t k);

// Greedy longest-first selection of pairwise non-overlapping book spans
// (ties: smaller start first), stopping after max_n picks. Returns the
// selection sorted by descending length then ascending start.
std::vector<std::pair<size_t, size_t>> greedy_select_nonoverlapping(
    std::vector<std::pair<size_t, size_t>> spans, size_t max_n = static_cast<size_t>(-1));

} // namespace bookmem
