#pragma once

#include <string>
#include <vector>

#include "types.hpp"

namespace osst {

struct LabeledScore {
    double score = 0.0;
    bool label = false;
};

enum class Objective { MacroF1, F1Positive };

std::string objective_name(Objective o);
Objective objective_from_name(const std::string& name);

double evaluate_objective(Objective o, const std::vector<bool>& decisions,
                          const std::vector<bool>& gold);

// Exact sweep. Decision rule: score >= threshold. Candidate thresholds are
// the lowest score (accept everything), the midpoints between consecutive
// distinct scores, and +inf (reject everything); ties resolve to the
// smallest threshold. Degenerate single-class inputs return the -inf
// (all-positive) or +inf (all-negative) sentinel.
CalibrationResult calibrate_threshold(const std::vector<LabeledScore>& instances, Objective o);

}  // namespace osst
