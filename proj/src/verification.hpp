#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "calibration.hpp"
#include "scoring.hpp"
#include "types.hpp"

namespace osst {

struct VerificationInstance {
    std::string first_id;
    std::string second_id;
    std::optional<bool> same_author;
};

struct VerifyDecision {
    double score = 0.0;
    bool decision = false;  // score >= threshold accepts
};

// Symmetric nOSST score with the chosen variant; for Rs the anchors must be
// non-empty and disjoint by id from the pair.
VerifyDecision verify_pair(const ScoringContext& ctx, const Styled& t1, const Styled& t2,
                           Variant variant, const std::vector<Styled>& anchors, double threshold);

struct LabeledPair {
    Styled first;
    Styled second;
    bool same_author = false;
};

struct AnchorAblationEntry {
    int k = 0;
    double mean_objective = 0.0;
    double std_objective = 0.0;  // population std over repeats
    std::vector<double> per_run;
};

// For each k > 0, draws k anchors from the fixed pool without replacement
// (mt19937_64 seeded once, Fisher-Yates with modulo draws, single stream
// across all runs), recalibrates the threshold per run on the calibration
// pairs and evaluates the objective on the evaluation pairs. k = 0 is the
// zero-shot variant.
std::vector<AnchorAblationEntry> anchor_ablation(const ScoringContext& ctx,
                                                 const std::vector<LabeledPair>& calibration,
                                                 const std::vector<LabeledPair>& evaluation,
                                                 const std::vector<Styled>& anchor_pool,
                                                 const std::vector<int>& k_values, int repeats,
                                                 std::uint64_t seed, Objective objective);

void to_json(json& j, const VerificationInstance& v);
void from_json(const json& j, VerificationInstance& v);

}  // namespace osst
