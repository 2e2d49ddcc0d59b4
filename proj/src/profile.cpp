#include "bookmem/profile.hpp"

namespace bookmem {
namespace uni {

uint32_t decode(std::string_view s, size_t& i) {
    const auto b0 = static_cast<uint8_t>(s[i]);
    if (b0 < 0x80) {
        ++i;
        return b0;
    }
    int len = 0;
    uint32_t cp = 0;
    if ((b0 & 0xE0) == 0xC0) {
        len = 2;
        cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
        len = 3;
        cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
        len = 4;
        cp = b0 & 0x07;
    } else {
        ++i;
        return 0xFFFD;
    }
    if (i + len > s.size()) {
        ++i;
        return 0xFFFD;
    }
    for (int j = 1; j < len; ++j) {
        const auto b = static_cast<uint8_t>(s[i + j]);
        if ((b & 0xC0) != 0x80) {
            ++i;
            return 0xFFFD;
        }
        cp = (cp << 6) | (b & 0x3F);
    }
    i += len;
    return cp;
}

void encode(uint32_t cp, std::string& out) {
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

bool is_whitespace(uint32_t cp) {
    switch (cp) {
        case 0x09: case 0x0A: case 0x0B: case 0x0C: case 0x0D: case 0x20:
        case 0x85: case 0xA0: case 0x1680: case 0x2028: case 0x2029:
        case 0x202F: case 0x205F: case 0x3000:
            return true;
        default:
            return cp >= 0x2000 && cp <= 0x200A;
    }
}

bool is_punct_or_symbol(uint32_t cp) {
    if (cp < 0x80) {
        return (cp >= 0x21 && cp <= 0x2F) || (cp >= 0x3A && cp <= 0x40) ||
               (cp >= 0x5B && cp <= 0x60) || (cp >= 0x7B && cp <= 0x7E);
    }
    // Latin-1 punctuation and symbols.
    if (cp >= 0xA1 && cp <= 0xBF) return true;
    if (cp == 0xD7 || cp == 0xF7) return true;
    // General Punctuation, superscripts, currency, letterlike, arrows,
    // math operators, misc technical, box drawing, misc symbols, dingbats.
    if (cp >= 0x2010 && cp <= 0x2BFF) return true;
    // CJK symbols and punctuation, fullwidth forms.
    if (cp >= 0x3001 && cp <= 0x303F) return true;
    if (cp >= 0xFE30 && cp <= 0xFE4F) return true;
    if (cp >= 0xFF01 && cp <= 0xFF0F) return true;
    if (cp >= 0xFF1A && cp <= 0xFF20) return true;
    if (cp >= 0xFF3B && cp <= 0xFF40) return true;
    if (cp >= 0xFF5B && cp <= 0xFF65) return true;
    return false;
}

bool is_separator(uint32_t cp) {
    switch (cp) {
        case 0x2012: // figure dash
        case 0x2013: // en dash
        case 0x2014: // em dash
        case 0x2015: // horizontal bar
        case 0x2026: // ellipsis
        case 0x2E3A: // two-em dash
        case 0x2E3B: // three-em dash
        case 0x2044: // fraction slash
        case 0x2F:   // solidus
            return true;
        default:
            return false;
    }
}

uint32_t to_lower(uint32_t cp) {
    if (cp >= 'A' && cp <= 'Z') return cp + 0x20;
    // Latin-1 uppercase letters.
    if (cp >= 0xC0 && cp <= 0xDE && cp != 0xD7) return cp + 0x20;
    // Latin Extended-A: even/odd paired case forms.
    if (cp >= 0x100 && cp <= 0x177 && (cp % 2) == 0) return cp + 1;
    if (cp >= 0x179 && cp <= 0x17E && (cp % 2) == 1) return cp + 1;
    // Greek and Cyrillic basic ranges.
    if (cp >= 0x391 && cp <= 0x3A9 && cp != 0x3A2) return cp + 0x20;
    if (cp >= 0x410 && cp <= 0x42F) return cp + 0x20;
    if (cp >= 0x400 && cp <= 0x40F) return cp + 0x50;
    return cp;
}

uint32_t unify_quotes(uint32_t cp) {
    switch (cp) {
        case 0x2018: case 0x2019: case 0x201A: case 0x201B: case 0x2032:
            return '\'';
        case 0x201C: case 0x201D: case 0x201E: case 0x201F: case 0x2033:
        case 0xAB: case 0xBB:
            return '"';
        case 0x2010: case 0x2011:
            return '-';
        default:
            return cp;
    }
}

} // namespace uni

namespace {

// Shared scanner: invokes on_char for every kept character and on_break at
// every token boundary. byte ranges refer to the original text.
template <typename OnChar, typename OnBreak>
void scan(std::string_view text, const NormalizationProfile& profile, OnChar&& on_char, OnBreak&& on_break) {
    size_t i = 0;
    while (i < text.size()) {
        const size_t start = i;
        uint32_t cp = uni::decode(text, i);
        if (profile.quote_unification) cp = uni::unify_quotes(cp);
        if (uni::is_whitespace(cp) || uni::is_separator(cp)) {
            on_break();
            continue;
        }
        if (uni::is_punct_or_symbol(cp)) continue; // stripped in place
        if (profile.casefold) cp = uni::to_lower(cp);
        on_char(cp, start, i);
    }
    on_break();
}

} // namespace

std::vector<std::string> normalize_words(std::string_view text, const NormalizationProfile& profile) {
    std::vector<std::string> words;
    std::string current;
    scan(
        text, profile,
        [&](uint32_t cp, size_t, size_t) { uni::encode(cp, current); },
        [&] {
            if (!current.empty()) words.push_back(std::move(current));
            current.clear();
        });
    return words;
}

std::string normalize_string(std::string_view text, const NormalizationProfile& profile) {
    std::string out;
    bool pending_space = false;
    scan(
        text, profile,
        [&](uint32_t cp, size_t, size_t) {
            if (pending_space && !out.empty()) out.push_back(' ');
            pending_space = false;
            uni::encode(cp, out);
        },
        [&] { pending_space = true; });
    return out;
}

} // namespace bookmem
