#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "bookmem/profile.hpp"

namespace bookmem {

struct CorpusError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct RawBook {
    std::string book_id;
    std::string title;
    std::string author;
    std::string text;
};

// Byte range of one token in the raw text, from its first kept character to
// its last. Interior stripped punctuation stays inside the range, so the
// token "Dont" maps back to the raw bytes "Don't".
struct WordOffset {
    size_t byte_start = 0;
    size_t byte_end = 0;
};

struct Excerpt {
    size_t excerpt_id = 0;
    size_t word_start = 0;
    size_t word_end = 0; // half-open
    std::string text;    // raw substring via span_to_raw
};

struct TokenizedBook {
    std::string book_id;
    std::string title;
    std::string author;
    std::string raw_text;
    NormalizationProfile profile;
    std::vector<std::string> words;
    std::vector<WordOffset> word_offsets;
    std::vector<Excerpt> excerpts;

    size_t word_count() const { return words.size(); }
};

struct SegmentConfig {
    size_t min_words = 300;
    size_t max_words = 500;
};

// Tokenizes the whole book under the profile, recording per-word raw byte
// offsets. Throws CorpusError("empty book") if nothing survives.
TokenizedBook tokenize(const RawBook& book, const NormalizationProfile& profile);

// Populates book.excerpts by greedily accumulating blank-line-delimited
// paragraphs until the word count lands in [min_words, max_words]. Oversized
// paragraphs are split at sentence boundaries. The final remainder may fall
// below min_words. Excerpt ranges tile [0, word_count) exactly.
void segment(TokenizedBook& book, const SegmentConfig& config = {});

// Raw substring covering words [word_start, word_end), original punctuation
// and case preserved.
std::string span_to_raw(const TokenizedBook& book, size_t word_start, size_t word_end);

} // namespace bookmem
