#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "calibration.hpp"
#include "types.hpp"

namespace osst {

struct AttributionResult {
    std::string target_id;
    std::vector<std::pair<std::string, double>> ranking;  // descending score
    std::optional<std::string> predicted;                 // nullopt = NONE (open-set rejection)
    bool standardized = false;
    bool tie = false;  // top score shared by several authors
};

// z-score a target row across all candidate texts (population std);
// zero-variance rows map to all zeros.
std::vector<double> standardize_row(const std::vector<double>& row);

// Per-author mean of the (optionally standardized) row values.
std::vector<std::pair<std::string, double>> author_scores(const ScoreTable& table,
                                                          const Corpus& corpus,
                                                          const std::string& target_id,
                                                          bool standardize);

// Raw scores; ranking is monotone-invariant so standardization is not needed.
AttributionResult attribute_closed(const ScoreTable& table, const Corpus& corpus,
                                   const std::string& target_id);

// Standardized scores with rejection below the threshold.
AttributionResult attribute_open(const ScoreTable& table, const Corpus& corpus,
                                 const std::string& target_id, double threshold);

// Max standardized author score for one target, the quantity the open-set
// threshold is calibrated over.
double max_standardized_score(const ScoreTable& table, const Corpus& corpus,
                              const std::string& target_id);

// instances: (max standardized score, true-author-present label).
CalibrationResult calibrate_open_threshold(const std::vector<LabeledScore>& instances,
                                           Objective objective = Objective::MacroF1);

void to_json(json& j, const AttributionResult& r);
void from_json(const json& j, AttributionResult& r);

}  // namespace osst
