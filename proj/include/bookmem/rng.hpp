#pragma once

#include <cstdint>

namespace bookmem {

// splitmix64 mixing step; used to derive independent sub-seeds from a named
// top-level seed so parallel work is order-independent.
inline uint64_t mix64(uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

inline uint64_t derive_seed(uint64_t seed, uint64_t a) { return mix64(seed ^ mix64(a)); }

inline uint64_t derive_seed(uint64_t seed, uint64_t a, uint64_t b) {
    return mix64(derive_seed(seed, a) ^ mix64(b ^ 0x5851F42D4C957F2Dull));
}

} // namespace bookmem
