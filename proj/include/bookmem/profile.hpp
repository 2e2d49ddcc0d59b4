#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace bookmem {

// How raw text is reduced to word tokens before matching.
//
// exact: punctuation stripped, case preserved. Used for span matching.
// soft:  punctuation stripped, casefolded, curly quotes / ellipsis glyphs
//        unified, whitespace collapsed. Used for soft provenance lookups.
enum class MatchMode { exact, soft };

struct NormalizationProfile {
    MatchMode mode = MatchMode::exact;
    bool casefold = false;
    bool quote_unification = false;

    static NormalizationProfile exact() { return {MatchMode::exact, false, false}; }
    static NormalizationProfile soft() { return {MatchMode::soft, true, true}; }
};

namespace uni {

// Decodes one UTF-8 codepoint starting at byte i; advances i past it.
// Malformed bytes decode as U+FFFD and advance by one.
uint32_t decode(std::string_view s, size_t& i);

void encode(uint32_t cp, std::string& out);

// Unicode general categories P* and S*, approximated over the ranges that
// occur in book text (ASCII, Latin-1, General Punctuation, CJK punctuation,
// common symbol blocks).
bool is_punct_or_symbol(uint32_t cp);

bool is_whitespace(uint32_t cp);

// Em/en dashes, ellipsis and similar glyphs split words instead of being
// removed in place, so "panic--ever" stays two words across editions.
bool is_separator(uint32_t cp);

uint32_t to_lower(uint32_t cp);

// Maps curly quotes, primes and ellipsis glyphs to their ASCII forms.
uint32_t unify_quotes(uint32_t cp);

} // namespace uni

// Splits text into word tokens under the profile: separators and whitespace
// delimit words, remaining punctuation is stripped in place, empty tokens
// are dropped.
std::vector<std::string> normalize_words(std::string_view text, const NormalizationProfile& profile);

// Full-string normalization for soft corpus matching: casefold, strip
// punctuation, collapse runs of whitespace to single spaces. Idempotent.
std::string normalize_string(std::string_view text, const NormalizationProfile& profile);

} // namespace bookmem
