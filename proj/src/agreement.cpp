#include "bookmem/agreement.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <stdexcept>

#include <boost/math/distributions/students_t.hpp>

#include "bookmem/rng.hpp"

namespace bookmem {

double pearson(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size()) throw std::invalid_argument("pearson: length mismatch");
    const size_t n = xs.size();
    if (n < 2) throw std::invalid_argument("pearson: need at least 2 points");
    double mx = 0, my = 0;
    for (size_t i = 0; i < n; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0, sxx = 0, syy = 0;
    for (size_t i = 0; i < n; ++i) {
        const double dx = xs[i] - mx, dy = ys[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) throw std::invalid_argument("pearson: zero variance");
    return sxy / std::sqrt(sxx * syy);
}

std::vector<double> fractional_ranks(const std::vector<double>& v) {
    const size_t n = v.size();
    std::vector<size_t> order(n);
    for (size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(n);
    size_t i = 0;
    while (i < n) {
        size_t j = i;
        while (j < n && v[order[j]] == v[order[i]]) ++j;
        const double avg = (static_cast<double>(i) + static_cast<double>(j - 1)) / 2.0 + 1.0;
        for (size_t t = i; t < j; ++t) ranks[order[t]] = avg;
        i = j;
    }
    return ranks;
}

double spearman(const std::vector<double>& xs, const std::vector<double>& ys) {
    return pearson(fractional_ranks(xs), fractional_ranks(ys));
}

double spearman_p_value(const std::vector<double>& xs, const std::vector<double>& ys) {
    const double rho = spearman(xs, ys);
    const size_t n = xs.size();
    if (n <= 10) {
        // Exact permutation test over distinct arrangements of the y-ranks.
        const std::vector<double> rx = fractional_ranks(xs);
        std::vector<double> ry = fractional_ranks(ys);
        std::sort(ry.begin(), ry.end());
        size_t total = 0, extreme = 0;
        const double eps = 1e-12;
        do {
            ++total;
            if (std::abs(pearson(rx, ry)) >= std::abs(rho) - eps) ++extreme;
        } while (std::next_permutation(ry.begin(), ry.end()));
        return static_cast<double>(extreme) / static_cast<double>(total);
    }
    if (std::abs(rho) >= 1.0) return 0.0;
    const double df = static_cast<double>(n - 2);
    const double t = rho * std::sqrt(df / (1.0 - rho * rho));
    boost::math::students_t dist(df);
    return 2.0 * boost::math::cdf(dist, -std::abs(t));
}

JaccardResult jaccard(const CoverageMask& a, const CoverageMask& b) {
    if (a.size() != b.size()) throw std::invalid_argument("jaccard: mask length mismatch");
    const auto counts = a.and_or_counts(b);
    JaccardResult r;
    if (counts.either == 0) {
        r.value = 1.0;
        r.both_empty = true;
    } else {
        r.value = static_cast<double>(counts.both) / static_cast<double>(counts.either);
    }
    return r;
}

double shuffled_baseline(const CoverageMask& a, const CoverageMask& b, size_t trials,
                         uint64_t seed) {
    if (a.size() != b.size()) throw std::invalid_argument("shuffled_baseline: length mismatch");
    if (trials == 0) throw std::invalid_argument("shuffled_baseline: trials must be >= 1");
    const size_t n = a.size();
    const size_t pa = a.popcount(), pb = b.popcount();
    double sum = 0.0;
    for (size_t trial = 0; trial < trials; ++trial) {
        std::mt19937_64 rng(derive_seed(seed, trial));
        std::vector<uint8_t> sa(n, 0), sb(n, 0);
        std::fill(sa.begin(), sa.begin() + static_cast<ptrdiff_t>(pa), 1);
        std::fill(sb.begin(), sb.begin() + static_cast<ptrdiff_t>(pb), 1);
        std::shuffle(sa.begin(), sa.end(), rng);
        std::shuffle(sb.begin(), sb.end(), rng);
        size_t both = 0, either = 0;
        for (size_t i = 0; i < n; ++i) {
            both += sa[i] & sb[i];
            either += sa[i] | sb[i];
        }
        sum += either == 0 ? 1.0 : static_cast<double>(both) / static_cast<double>(either);
    }
    return sum / static_cast<double>(trials);
}

double split_half_self_agreement(const TokenizedBook& book, const std::vector<PromptRecord>& prompts,
                                 const std::vector<Generation>& generations, const BmcConfig& config,
                                 size_t trials, uint64_t seed) {
    if (trials == 0) throw std::invalid_argument("split_half: trials must be >= 1");
    std::map<size_t, std::vector<size_t>> by_excerpt;
    for (size_t i = 0; i < generations.size(); ++i)
        by_excerpt[generations[i].excerpt_id].push_back(i);
    for (const auto& [ex, idx] : by_excerpt)
        if (idx.size() < 2)
            throw std::invalid_argument("split_half: excerpt " + std::to_string(ex) +
                                        " has fewer than 2 generations");
    if (by_excerpt.empty()) throw std::invalid_argument("split_half: no generations");

    double sum = 0.0;
    for (size_t trial = 0; trial < trials; ++trial) {
        std::mt19937_64 rng(derive_seed(seed, trial));
        std::vector<Generation> half_a, half_b;
        for (const auto& [ex, idx] : by_excerpt) {
            std::vector<size_t> shuffled = idx;
            std::shuffle(shuffled.begin(), shuffled.end(), rng);
            const size_t half = shuffled.size() / 2;
            for (size_t i = 0; i < shuffled.size(); ++i)
                (i < half ? half_a : half_b).push_back(generations[shuffled[i]]);
        }
        const BmcReport ra = bmc(book, prompts, half_a, config);
        const BmcReport rb = bmc(book, prompts, half_b, config);
        sum += jaccard(ra.mask, rb.mask).value;
    }
    return sum / static_cast<double>(trials);
}

MaskPairStats mask_pair_stats(const CoverageMask& a, const CoverageMask& b, double self_agreement_a,
                              double self_agreement_b, size_t shuffle_trials, uint64_t seed) {
    MaskPairStats stats;
    const JaccardResult j = jaccard(a, b);
    stats.jaccard = j.value;
    stats.both_empty = j.both_empty;
    stats.shuffled_baseline_mean = shuffled_baseline(a, b, shuffle_trials, seed);
    stats.self_agreement_a = self_agreement_a;
    stats.self_agreement_b = self_agreement_b;
    const double floor = std::min(self_agreement_a, self_agreement_b);
    stats.normalized_overlap = floor > 0.0 ? stats.jaccard / floor : 0.0;
    return stats;
}

} // namespace bookmem
