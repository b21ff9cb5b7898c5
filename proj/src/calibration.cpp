#include "calibration.hpp"

#include <algorithm>
#include <limits>

#include "errors.hpp"
#include "metrics.hpp"

namespace osst {

std::string objective_name(Objective o) {
    return o == Objective::MacroF1 ? "macro_f1" : "f1_positive";
}

Objective objective_from_name(const std::string& name) {
    if (name == "macro_f1" || name == "binary_macro_f1") return Objective::MacroF1;
    if (name == "f1_positive") return Objective::F1Positive;
    throw usage_error("unknown objective: " + name);
}

double evaluate_objective(Objective o, const std::vector<bool>& decisions,
                          const std::vector<bool>& gold) {
    return o == Objective::MacroF1 ? binary_macro_f1(decisions, gold)
                                   : f1_positive(decisions, gold);
}

CalibrationResult calibrate_threshold(const std::vector<LabeledScore>& instances, Objective o) {
    if (instances.empty()) throw usage_error("calibration requires at least one instance");

    std::vector<bool> gold;
    gold.reserve(instances.size());
    for (const auto& i : instances) gold.push_back(i.label);

    auto evaluate_at = [&](double threshold) {
        std::vector<bool> decisions;
        decisions.reserve(instances.size());
        for (const auto& i : instances) decisions.push_back(i.score >= threshold);
        return evaluate_objective(o, decisions, gold);
    };

    CalibrationResult result;
    result.objective_name = objective_name(o);
    result.n_calibration = instances.size();

    const bool any_pos = std::any_of(gold.begin(), gold.end(), [](bool b) { return b; });
    const bool any_neg = std::any_of(gold.begin(), gold.end(), [](bool b) { return !b; });
    if (!any_neg) {
        result.threshold = -std::numeric_limits<double>::infinity();
        result.objective_value = evaluate_at(result.threshold);
        return result;
    }
    if (!any_pos) {
        result.threshold = std::numeric_limits<double>::infinity();
        result.objective_value = evaluate_at(result.threshold);
        return result;
    }

    std::vector<double> distinct;
    distinct.reserve(instances.size());
    for (const auto& i : instances) distinct.push_back(i.score);
    std::sort(distinct.begin(), distinct.end());
    distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

    std::vector<double> candidates;
    candidates.push_back(distinct.front());  // accepts everything
    for (std::size_t i = 1; i < distinct.size(); ++i)
        candidates.push_back(0.5 * (distinct[i - 1] + distinct[i]));
    candidates.push_back(std::numeric_limits<double>::infinity());  // rejects everything

    result.threshold = candidates.front();
    result.objective_value = evaluate_at(candidates.front());
    for (std::size_t i = 1; i < candidates.size(); ++i) {
        const double value = evaluate_at(candidates[i]);
        if (value > result.objective_value) {  // ties keep the smallest threshold
            result.objective_value = value;
            result.threshold = candidates[i];
        }
    }
    return result;
}

}  // namespace osst
