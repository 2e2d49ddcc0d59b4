#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "bookmem/kernels.hpp"

namespace bookmem {

// Per-word-position bit mask over a book.
class CoverageMask {
  public:
    CoverageMask() = default;
    explicit CoverageMask(size_t n_bits) : n_bits_(n_bits), words_((n_bits + 63) / 64, 0) {}

    size_t size() const { return n_bits_; }
    bool empty() const { return n_bits_ == 0; }

    bool test(size_t i) const { return (words_[i / 64] >> (i % 64)) & 1; }

    void set(size_t i) { words_[i / 64] |= uint64_t{1} << (i % 64); }

    void set_range(size_t begin, size_t end) {
        for (size_t i = begin; i < end; ++i) set(i);
    }

    size_t popcount() const { return kernels::popcount(words_.data(), words_.size()); }

    // Longest run of set bits.
    size_t longest_run() const {
        size_t best = 0, run = 0;
        for (size_t i = 0; i < n_bits_; ++i) {
            run = test(i) ? run + 1 : 0;
            if (run > best) best = run;
        }
        return best;
    }

    void merge_or(const CoverageMask& other) {
        check_same_size(other);
        for (size_t w = 0; w < words_.size(); ++w) words_[w] |= other.words_[w];
    }

    kernels::AndOrCounts and_or_counts(const CoverageMask& other) const {
        check_same_size(other);
        return kernels::popcount_and_or(words_.data(), other.words_.data(), words_.size());
    }

    // Positions of set bits, ascending.
    std::vector<size_t> set_positions() const {
        std::vector<size_t> out;
        for (size_t i = 0; i < n_bits_; ++i)
            if (test(i)) out.push_back(i);
        return out;
    }

    // Maximal runs of set bits as half-open ranges.
    std::vector<std::pair<size_t, size_t>> runs() const {
        std::vector<std::pair<size_t, size_t>> out;
        size_t i = 0;
        while (i < n_bits_) {
            if (!test(i)) {
                ++i;
                continue;
            }
            size_t j = i;
            while (j < n_bits_ && test(j)) ++j;
            out.emplace_back(i, j);
            i = j;
        }
        return out;
    }

    bool operator==(const CoverageMask& other) const {
        return n_bits_ == other.n_bits_ && words_ == other.words_;
    }

    const std::vector<uint64_t>& words() const { return words_; }

  private:
    void check_same_size(const CoverageMask& other) const {
        if (n_bits_ != other.n_bits_) throw std::invalid_argument("mask length mismatch");
    }

    size_t n_bits_ = 0;
    std::vector<uint64_t> words_;
};

// Run-length encoding "start-end,start-end" over set-bit runs, and base64 of
// the raw bit string. Both stable across runs.
std::string mask_to_rle(const CoverageMask& mask);
CoverageMask mask_from_rle(const std::string& rle, size_t n_bits);
std::string mask_to_base64(const CoverageMask& mask);
CoverageMask mask_from_base64(const std::string& b64, size_t n_bits);

} // namespace bookmem
