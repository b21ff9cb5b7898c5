#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "types.hpp"

namespace osst {

double accuracy(const std::vector<std::string>& predictions, const std::vector<std::string>& gold);

// 1 - (r-1)/(n-1) for the 1-based position r of the gold author; 1.0 when
// n == 1. Higher is better. Throws if the gold author is not ranked.
double normalized_rank(const std::vector<std::string>& ranking, const std::string& gold_author,
                       std::size_t n_candidates);

// Unweighted mean of per-class F1 over {positive, negative}; a class with
// precision + recall == 0 contributes F1 = 0.
double binary_macro_f1(const std::vector<bool>& decisions, const std::vector<bool>& gold);

double f1_positive(const std::vector<bool>& decisions, const std::vector<bool>& gold);

struct PositionProfile {
    // medians[p] is meaningful iff counts[p] > 0
    std::vector<double> medians;
    std::vector<std::size_t> counts;
    std::size_t skipped_pairs = 0;  // pairs with mismatched token counts
};

// Per-position median of (one-shot token logprob - zero-shot token logprob)
// over aligned (one-shot, zero-shot) TransferScore pairs for the same target.
PositionProfile position_profile(
    const std::vector<std::pair<TransferScore, TransferScore>>& pairs,
    std::size_t max_position);

}  // namespace osst
