#pragma once

#include <cstdint>
#include <vector>

#include "bookmem/coverage.hpp"
#include "bookmem/mask.hpp"

namespace bookmem {

// Sample Pearson correlation. Throws on length mismatch, n < 2, or zero
// variance in either argument.
double pearson(const std::vector<double>& xs, const std::vector<double>& ys);

// Pearson of tie-aware average ranks.
double spearman(const std::vector<double>& xs, const std::vector<double>& ys);

// Two-sided p-value for Spearman's rho: exact permutation test for n <= 10,
// t-approximation otherwise.
double spearman_p_value(const std::vector<double>& xs, const std::vector<double>& ys);

// Fractional (average) 1-based ranks, ties sharing the mean rank of the
// tied block.
std::vector<double> fractional_ranks(const std::vector<double>& v);

struct JaccardResult {
    double value = 0.0;
    bool both_empty = false; // empty/empty reported as 1.0, flagged
};

JaccardResult jaccard(const CoverageMask& a, const CoverageMask& b);

// Mean Jaccard over trials of independently permuting each mask's bits
// (densities preserved).
double shuffled_baseline(const CoverageMask& a, const CoverageMask& b, size_t trials,
                         uint64_t seed);

// Per trial, partition each excerpt's generations into two equal halves,
// score each half through the coverage pipeline, and take the masks'
// Jaccard. Returns the mean over trials. Throws if any excerpt has < 2
// generations.
double split_half_self_agreement(const TokenizedBook& book, const std::vector<PromptRecord>& prompts,
                                 const std::vector<Generation>& generations, const BmcConfig& config,
                                 size_t trials, uint64_t seed);

struct MaskPairStats {
    double jaccard = 0.0;
    bool both_empty = false;
    double shuffled_baseline_mean = 0.0;
    double self_agreement_a = 0.0;
    double self_agreement_b = 0.0;
    double normalized_overlap = 0.0; // jaccard / min(self_a, self_b); may exceed 1
};

MaskPairStats mask_pair_stats(const CoverageMask& a, const CoverageMask& b, double self_agreement_a,
                              double self_agreement_b, size_t shuffle_trials, uint64_t seed);

} // namespace bookmem
