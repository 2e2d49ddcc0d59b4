#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "bookmem/kernels.hpp"

using namespace bookmem;

TEST_CASE("dispatch resolves to a named implementation") {
    CHECK(kernels::active().name != nullptr);
}

TEST_CASE("scalar popcount_and_or on known words") {
    const uint64_t a[] = {0b1111, 0};
    const uint64_t b[] = {0b0101, 0b11};
    const auto c = kernels::scalar::popcount_and_or(a, b, 2);
    CHECK(c.both == 2);
    CHECK(c.either == 6);
}

TEST_CASE("scalar common_prefix") {
    const uint32_t a[] = {1, 2, 3, 4, 5};
    const uint32_t b[] = {1, 2, 9, 4, 5};
    CHECK(kernels::scalar::common_prefix(a, b, 5) == 2);
    CHECK(kernels::scalar::common_prefix(a, a, 5) == 5);
    CHECK(kernels::scalar::common_prefix(a, b, 0) == 0);
}

#if defined(__x86_64__) || defined(_M_X64)
TEST_CASE("avx2 variants agree with scalar reference") {
    if (!__builtin_cpu_supports("avx2")) return;
    std::mt19937_64 rng(123);
    for (int trial = 0; trial < 300; ++trial) {
        std::uniform_int_distribution<size_t> len(0, 130);
        const size_t n = len(rng);

        std::vector<uint64_t> a(n), b(n);
        for (auto& x : a) x = rng();
        for (size_t i = 0; i < n; ++i) b[i] = (rng() % 3 == 0) ? a[i] : rng();
        const auto s = kernels::scalar::popcount_and_or(a.data(), b.data(), n);
        const auto v = kernels::avx2::popcount_and_or(a.data(), b.data(), n);
        CHECK(s.both == v.both);
        CHECK(s.either == v.either);
        CHECK(kernels::scalar::popcount(a.data(), n) == kernels::avx2::popcount(a.data(), n));

        std::vector<uint32_t> u(n), w(n);
        for (auto& x : u) x = static_cast<uint32_t>(rng() % 7);
        w = u;
        // Sometimes plant a divergence to hit every lane offset.
        if (n > 0 && trial % 2 == 0) w[rng() % n] += 1;
        CHECK(kernels::scalar::common_prefix(u.data(), w.data(), n) ==
              kernels::avx2::common_prefix(u.data(), w.data(), n));
    }
}
#endif
