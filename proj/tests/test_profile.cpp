#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "bookmem/profile.hpp"

using namespace bookmem;

TEST_CASE("exact profile strips punctuation, keeps case") {
    const auto words = normalize_words("The CAT sat.", NormalizationProfile::exact());
    REQUIRE(words.size() == 3);
    CHECK(words[0] == "The");
    CHECK(words[1] == "CAT");
    CHECK(words[2] == "sat");
}

TEST_CASE("soft profile casefolds") {
    const auto words = normalize_words("The CAT sat.", NormalizationProfile::soft());
    REQUIRE(words.size() == 3);
    CHECK(words[0] == "the");
    CHECK(words[1] == "cat");
    CHECK(words[2] == "sat");
}

TEST_CASE("em dash separates words, apostrophe strips in place") {
    const auto words = normalize_words("Don't panic—ever.", NormalizationProfile::exact());
    REQUIRE(words.size() == 3);
    CHECK(words[0] == "Dont");
    CHECK(words[1] == "panic");
    CHECK(words[2] == "ever");
}

TEST_CASE("en dash and ellipsis also separate") {
    CHECK(normalize_words("a–b", NormalizationProfile::exact()).size() == 2);
    CHECK(normalize_words("a…b", NormalizationProfile::exact()).size() == 2);
    CHECK(normalize_words("a/b", NormalizationProfile::exact()).size() == 2);
}

TEST_CASE("curly quotes unify to ascii under soft profile") {
    // U+201C curly quotes strip either way; unification must not resurrect them.
    CHECK(normalize_words("“Hello”", NormalizationProfile::soft()) ==
          std::vector<std::string>{"hello"});
    CHECK(normalize_string("“Hello” there", NormalizationProfile::soft()) ==
          "hello there");
}

TEST_CASE("empty and punctuation-only input yields no words") {
    CHECK(normalize_words("", NormalizationProfile::exact()).empty());
    CHECK(normalize_words("... !!! ---", NormalizationProfile::exact()).empty());
}

TEST_CASE("normalize_string collapses whitespace") {
    CHECK(normalize_string("a\n\tb   c", NormalizationProfile::soft()) == "a b c");
}

TEST_CASE("soft normalization is idempotent on random strings") {
    std::mt19937_64 rng(7);
    const std::string alphabet = "abcXYZ '\".,!?-\n\t";
    for (int trial = 0; trial < 200; ++trial) {
        std::string s;
        std::uniform_int_distribution<size_t> len(0, 60), pick(0, alphabet.size() - 1);
        const size_t n = len(rng);
        for (size_t i = 0; i < n; ++i) s.push_back(alphabet[pick(rng)]);
        const auto once = normalize_string(s, NormalizationProfile::soft());
        CHECK(normalize_string(once, NormalizationProfile::soft()) == once);
    }
}

TEST_CASE("utf8 decode handles multibyte and malformed input") {
    size_t i = 0;
    CHECK(uni::decode("é", i) == 0xE9);
    CHECK(i == 2);
    i = 0;
    CHECK(uni::decode("\xFF", i) == 0xFFFD);
    CHECK(i == 1);
}
