#include "bookmem/kernels.hpp"

#include <bit>
#include <cstdlib>
#include <cstring>

#if defined(__x86_64__) || defined(_M_X64)
#include <immintrin.h>
#endif

namespace bookmem::kernels {

namespace scalar {

AndOrCounts popcount_and_or(const uint64_t* a, const uint64_t* b, size_t n_words) {
    AndOrCounts c;
    for (size_t i = 0; i < n_words; ++i) {
        c.both += std::popcount(a[i] & b[i]);
        c.either += std::popcount(a[i] | b[i]);
    }
    return c;
}

uint64_t popcount(const uint64_t* a, size_t n_words) {
    uint64_t c = 0;
    for (size_t i = 0; i < n_words; ++i) c += std::popcount(a[i]);
    return c;
}

size_t common_prefix(const uint32_t* a, const uint32_t* b, size_t n) {
    size_t i = 0;
    while (i < n && a[i] == b[i]) ++i;
    return i;
}

} // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {

__attribute__((target("avx2"))) AndOrCounts popcount_and_or(const uint64_t* a, const uint64_t* b,
                                                            size_t n_words) {
    AndOrCounts c;
    size_t i = 0;
    for (; i + 4 <= n_words; i += 4) {
        const __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
        const __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
        alignas(32) uint64_t land[4], lor[4];
        _mm256_store_si256(reinterpret_cast<__m256i*>(land), _mm256_and_si256(va, vb));
        _mm256_store_si256(reinterpret_cast<__m256i*>(lor), _mm256_or_si256(va, vb));
        c.both += std::popcount(land[0]) + std::popcount(land[1]) + std::popcount(land[2]) +
                  std::popcount(land[3]);
        c.either += std::popcount(lor[0]) + std::popcount(lor[1]) + std::popcount(lor[2]) +
                    std::popcount(lor[3]);
    }
    for (; i < n_words; ++i) {
        c.both += std::popcount(a[i] & b[i]);
        c.either += std::popcount(a[i] | b[i]);
    }
    return c;
}

uint64_t popcount(const uint64_t* a, size_t n_words) {
    return scalar::popcount(a, n_words); // hardware popcnt already saturates
}

__attribute__((target("avx2"))) size_t common_prefix(const uint32_t* a, const uint32_t* b,
                                                     size_t n) {
    size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256i va = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(a + i));
        const __m256i vb = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(b + i));
        const uint32_t eq =
            static_cast<uint32_t>(_mm256_movemask_epi8(_mm256_cmpeq_epi32(va, vb)));
        if (eq != 0xFFFFFFFFu) return i + static_cast<size_t>(std::countr_one(eq)) / 4;
    }
    while (i < n && a[i] == b[i]) ++i;
    return i;
}

} // namespace avx2
#endif

namespace {

Dispatch resolve() {
    const Dispatch scalar_table{scalar::popcount_and_or, scalar::popcount, scalar::common_prefix,
                                "scalar"};
    const char* force = std::getenv("BOOKMEM_SIMD");
    if (force && std::strcmp(force, "scalar") == 0) return scalar_table;
#if defined(__x86_64__) || defined(_M_X64)
    if (__builtin_cpu_supports("avx2"))
        return {avx2::popcount_and_or, avx2::popcount, avx2::common_prefix, "avx2"};
#endif
    return scalar_table;
}

} // namespace

const Dispatch& active() {
    static const Dispatch table = resolve();
    return table;
}

} // namespace bookmem::kernels
