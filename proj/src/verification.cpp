#include "verification.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "errors.hpp"

namespace osst {

VerifyDecision verify_pair(const ScoringContext& ctx, const Styled& t1, const Styled& t2,
                           Variant variant, const std::vector<Styled>& anchors,
                           double threshold) {
    if (t1.doc.id == t2.doc.id) throw usage_error("verification pair must be two distinct documents");
    VerifyDecision out;
    out.score = symmetric_score(ctx, t1, t2, variant, anchors);
    out.decision = out.score >= threshold;
    return out;
}

namespace {

double pair_score(const ScoringContext& ctx, const LabeledPair& p, Variant variant,
                  const std::vector<Styled>& anchors) {
    return symmetric_score(ctx, p.first, p.second, variant, anchors);
}

std::vector<Styled> draw_anchors(const std::vector<Styled>& pool, int k, std::mt19937_64& rng) {
    std::vector<std::size_t> idx(pool.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    // Fisher-Yates with modulo draws: deterministic across platforms,
    // unlike std::shuffle / uniform_int_distribution.
    for (std::size_t i = idx.size() - 1; i > 0; --i) {
        const std::size_t j = static_cast<std::size_t>(rng() % (i + 1));
        std::swap(idx[i], idx[j]);
    }
    // canonicalize to pool order so the anchor mean is summed identically
    // for equal anchor sets regardless of draw order
    std::vector<std::size_t> chosen(idx.begin(), idx.begin() + k);
    std::sort(chosen.begin(), chosen.end());
    std::vector<Styled> out;
    for (std::size_t i : chosen) out.push_back(pool[i]);
    return out;
}

double run_objective(const ScoringContext& ctx, const std::vector<LabeledPair>& calibration,
                     const std::vector<LabeledPair>& evaluation, Variant variant,
                     const std::vector<Styled>& anchors, Objective objective) {
    std::vector<LabeledScore> calib;
    for (const auto& p : calibration)
        calib.push_back({pair_score(ctx, p, variant, anchors), p.same_author});
    const CalibrationResult cal = calibrate_threshold(calib, objective);

    std::vector<bool> decisions, gold;
    for (const auto& p : evaluation) {
        decisions.push_back(pair_score(ctx, p, variant, anchors) >= cal.threshold);
        gold.push_back(p.same_author);
    }
    return evaluate_objective(objective, decisions, gold);
}

}  // namespace

std::vector<AnchorAblationEntry> anchor_ablation(const ScoringContext& ctx,
                                                 const std::vector<LabeledPair>& calibration,
                                                 const std::vector<LabeledPair>& evaluation,
                                                 const std::vector<Styled>& anchor_pool,
                                                 const std::vector<int>& k_values, int repeats,
                                                 std::uint64_t seed, Objective objective) {
    if (anchor_pool.size() > 10) throw usage_error("anchor pool larger than 10");
    if (repeats < 1) throw usage_error("repeats must be positive");
    if (calibration.empty() || evaluation.empty())
        throw usage_error("anchor ablation needs calibration and evaluation pairs");
    for (int k : k_values)
        if (k < 0 || static_cast<std::size_t>(k) > anchor_pool.size())
            throw usage_error("k value out of range: " + std::to_string(k));

    std::mt19937_64 rng(seed);
    std::vector<AnchorAblationEntry> report;
    for (int k : k_values) {
        AnchorAblationEntry entry;
        entry.k = k;
        for (int rep = 0; rep < repeats; ++rep) {
            double value;
            if (k == 0) {
                value = run_objective(ctx, calibration, evaluation, Variant::Zs, {}, objective);
            } else {
                const auto anchors = draw_anchors(anchor_pool, k, rng);
                value = run_objective(ctx, calibration, evaluation, Variant::Rs, anchors, objective);
            }
            entry.per_run.push_back(value);
        }
        double mean = 0.0;
        for (double v : entry.per_run) mean += v;
        mean /= static_cast<double>(entry.per_run.size());
        double var = 0.0;
        for (double v : entry.per_run) var += (v - mean) * (v - mean);
        var /= static_cast<double>(entry.per_run.size());
        entry.mean_objective = mean;
        entry.std_objective = std::sqrt(var);
        report.push_back(std::move(entry));
    }
    return report;
}

void to_json(json& j, const VerificationInstance& v) {
    j = json{{"first", v.first_id}, {"second", v.second_id}};
    if (v.same_author) j["same"] = *v.same_author;
}

void from_json(const json& j, VerificationInstance& v) {
    j.at("first").get_to(v.first_id);
    j.at("second").get_to(v.second_id);
    if (j.contains("same") && !j.at("same").is_null())
        v.same_author = j.at("same").get<bool>();
    else
        v.same_author.reset();
}

}  // namespace osst
