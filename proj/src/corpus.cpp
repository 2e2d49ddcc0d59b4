#include "bookmem/corpus.hpp"

#include <algorithm>

namespace bookmem {

TokenizedBook tokenize(const RawBook& book, const NormalizationProfile& profile) {
    TokenizedBook out;
    out.book_id = book.book_id;
    out.title = book.title;
    out.author = book.author;
    out.raw_text = book.text;
    out.profile = profile;

    std::string_view text = out.raw_text;
    std::string current;
    size_t tok_start = 0, tok_end = 0;

    auto flush = [&] {
        if (!current.empty()) {
            out.words.push_back(std::move(current));
            out.word_offsets.push_back({tok_start, tok_end});
            current.clear();
        }
    };

    size_t i = 0;
    while (i < text.size()) {
        const size_t start = i;
        uint32_t cp = uni::decode(text, i);
        if (profile.quote_unification) cp = uni::unify_quotes(cp);
        if (uni::is_whitespace(cp) || uni::is_separator(cp)) {
            flush();
            continue;
        }
        if (uni::is_punct_or_symbol(cp)) continue;
        if (profile.casefold) cp = uni::to_lower(cp);
        if (current.empty()) tok_start = start;
        tok_end = i;
        uni::encode(cp, current);
    }
    flush();

    if (out.words.empty()) throw CorpusError("empty book");
    return out;
}

std::string span_to_raw(const TokenizedBook& book, size_t word_start, size_t word_end) {
    if (word_start >= word_end || word_end > book.word_count())
        throw CorpusError("span_to_raw: word range out of bounds");
    const size_t b0 = book.word_offsets[word_start].byte_start;
    const size_t b1 = book.word_offsets[word_end - 1].byte_end;
    return book.raw_text.substr(b0, b1 - b0);
}

namespace {

// Word ranges of blank-line-delimited paragraphs, in order, tiling
// [0, word_count). Words falling after a blank line start a new paragraph.
std::vector<std::pair<size_t, size_t>> paragraph_ranges(const TokenizedBook& book) {
    // A paragraph break is any inter-word gap whose raw bytes contain two
    // newlines (possibly with other whitespace between them).
    std::vector<std::pair<size_t, size_t>> ranges;
    size_t start = 0;
    for (size_t w = 1; w < book.word_count(); ++w) {
        const size_t gap_begin = book.word_offsets[w - 1].byte_end;
        const size_t gap_end = book.word_offsets[w].byte_start;
        int newlines = 0;
        for (size_t b = gap_begin; b < gap_end; ++b)
            if (book.raw_text[b] == '\n') ++newlines;
        if (newlines >= 2) {
            ranges.emplace_back(start, w);
            start = w;
        }
    }
    ranges.emplace_back(start, book.word_count());
    return ranges;
}

// True if a sentence ends right after word w: the bytes between w's last
// kept character and the next word contain . ! or ?
bool sentence_break_after(const TokenizedBook& book, size_t w) {
    const size_t gap_begin = book.word_offsets[w].byte_end;
    const size_t gap_end =
        (w + 1 < book.word_count()) ? book.word_offsets[w + 1].byte_start : book.raw_text.size();
    for (size_t b = gap_begin; b < gap_end; ++b) {
        const char c = book.raw_text[b];
        if (c == '.' || c == '!' || c == '?') return true;
    }
    return false;
}

} // namespace

void segment(TokenizedBook& book, const SegmentConfig& config) {
    if (book.word_count() == 0) throw CorpusError("segment: empty book");
    const size_t min_w = config.min_words;
    const size_t max_w = std::max(config.max_words, min_w);

    book.excerpts.clear();
    auto emit = [&](size_t start, size_t end) {
        Excerpt e;
        e.excerpt_id = book.excerpts.size();
        e.word_start = start;
        e.word_end = end;
        e.text = span_to_raw(book, start, end);
        book.excerpts.push_back(std::move(e));
    };

    size_t acc_start = 0; // accumulator covers [acc_start, cursor)
    size_t cursor = 0;

    // Cuts [acc_start, cursor) down to at most max_w words by emitting
    // chunks split at the latest sentence boundary within the limit.
    auto drain_oversize = [&] {
        while (cursor - acc_start > max_w) {
            size_t cut = 0; // word count of the chunk to emit
            for (size_t n = max_w; n >= std::max<size_t>(min_w, 1); --n) {
                if (sentence_break_after(book, acc_start + n - 1)) {
                    cut = n;
                    break;
                }
            }
            if (cut == 0) cut = max_w; // no sentence boundary in range: hard split
            emit(acc_start, acc_start + cut);
            acc_start += cut;
        }
    };

    for (const auto& [p_start, p_end] : paragraph_ranges(book)) {
        const size_t p_words = p_end - p_start;
        const size_t acc_words = cursor - acc_start;
        if (acc_words > 0 && acc_words + p_words > max_w && acc_words >= min_w) {
            emit(acc_start, cursor);
            acc_start = cursor;
        }
        cursor = p_end;
        drain_oversize();
        if (cursor - acc_start >= min_w && cursor - acc_start <= max_w) {
            emit(acc_start, cursor);
            acc_start = cursor;
        }
    }
    if (cursor > acc_start) emit(acc_start, cursor); // short remainder
}

} // namespace bookmem
