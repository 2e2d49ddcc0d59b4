#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>

// Inner-loop kernels with scalar reference implementations and AVX2
// variants selected once at startup. Set BOOKMEM_SIMD=scalar to force the
// reference path.
namespace bookmem::kernels {

struct AndOrCounts {
    uint64_t both = 0;   // popcount(a & b)
    uint64_t either = 0; // popcount(a | b)
};

using PopcountAndOrFn = AndOrCounts (*)(const uint64_t*, const uint64_t*, size_t);
using PopcountFn = uint64_t (*)(const uint64_t*, size_t);
using CommonPrefixFn = size_t (*)(const uint32_t*, const uint32_t*, size_t);

namespace scalar {
AndOrCounts popcount_and_or(const uint64_t* a, const uint64_t* b, size_t n_words);
uint64_t popcount(const uint64_t* a, size_t n_words);
size_t common_prefix(const uint32_t* a, const uint32_t* b, size_t n);
} // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
AndOrCounts popcount_and_or(const uint64_t* a, const uint64_t* b, size_t n_words);
uint64_t popcount(const uint64_t* a, size_t n_words);
size_t common_prefix(const uint32_t* a, const uint32_t* b, size_t n);
} // namespace avx2
#endif

// Dispatch table, resolved on first use.
struct Dispatch {
    PopcountAndOrFn popcount_and_or;
    PopcountFn popcount;
    CommonPrefixFn common_prefix;
    const char* name;
};

const Dispatch& active();

inline AndOrCounts popcount_and_or(const uint64_t* a, const uint64_t* b, size_t n_words) {
    return active().popcount_and_or(a, b, n_words);
}
inline uint64_t popcount(const uint64_t* a, size_t n_words) {
    return active().popcount(a, n_words);
}
// Length of the longest common prefix of two id sequences.
inline size_t common_prefix(const uint32_t* a, const uint32_t* b, size_t n) {
    return active().common_prefix(a, b, n);
}

} // namespace bookmem::kernels
