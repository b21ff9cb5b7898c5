#include "metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "errors.hpp"

namespace osst {

double accuracy(const std::vector<std::string>& predictions,
                const std::vector<std::string>& gold) {
    if (predictions.size() != gold.size()) throw usage_error("accuracy: length mismatch");
    if (predictions.empty()) throw usage_error("accuracy: empty input");
    std::size_t correct = 0;
    for (std::size_t i = 0; i < predictions.size(); ++i)
        if (predictions[i] == gold[i]) ++correct;
    return static_cast<double>(correct) / static_cast<double>(predictions.size());
}

double normalized_rank(const std::vector<std::string>& ranking, const std::string& gold_author,
                       std::size_t n_candidates) {
    auto it = std::find(ranking.begin(), ranking.end(), gold_author);
    if (it == ranking.end())
        throw data_error("gold author " + gold_author + " not present in ranking");
    if (n_candidates < ranking.size()) throw usage_error("n_candidates smaller than ranking");
    if (n_candidates <= 1) return 1.0;
    const auto r = static_cast<double>(it - ranking.begin() + 1);
    return 1.0 - (r - 1.0) / (static_cast<double>(n_candidates) - 1.0);
}

namespace {

struct Confusion {
    std::size_t tp = 0, fp = 0, fn = 0, tn = 0;
};

Confusion confusion(const std::vector<bool>& decisions, const std::vector<bool>& gold) {
    if (decisions.size() != gold.size()) throw usage_error("f1: length mismatch");
    if (decisions.empty()) throw usage_error("f1: empty input");
    Confusion c;
    for (std::size_t i = 0; i < decisions.size(); ++i) {
        if (decisions[i] && gold[i]) ++c.tp;
        else if (decisions[i] && !gold[i]) ++c.fp;
        else if (!decisions[i] && gold[i]) ++c.fn;
        else ++c.tn;
    }
    return c;
}

double f1_from(std::size_t tp, std::size_t fp, std::size_t fn) {
    const double denom = static_cast<double>(2 * tp + fp + fn);
    return denom == 0.0 ? 0.0 : 2.0 * static_cast<double>(tp) / denom;
}

}  // namespace

double binary_macro_f1(const std::vector<bool>& decisions, const std::vector<bool>& gold) {
    const Confusion c = confusion(decisions, gold);
    const double f1_pos = f1_from(c.tp, c.fp, c.fn);
    const double f1_neg = f1_from(c.tn, c.fn, c.fp);
    return 0.5 * (f1_pos + f1_neg);
}

double f1_positive(const std::vector<bool>& decisions, const std::vector<bool>& gold) {
    const Confusion c = confusion(decisions, gold);
    return f1_from(c.tp, c.fp, c.fn);
}

PositionProfile position_profile(
    const std::vector<std::pair<TransferScore, TransferScore>>& pairs,
    std::size_t max_position) {
    if (pairs.empty()) throw usage_error("position profile: empty input");
    if (max_position == 0) throw usage_error("position profile: max_position must be positive");

    std::vector<std::vector<double>> diffs(max_position);
    PositionProfile profile;
    for (const auto& [one_shot, zero_shot] : pairs) {
        if (one_shot.token_logprobs.size() != zero_shot.token_logprobs.size()) {
            ++profile.skipped_pairs;
            continue;
        }
        const std::size_t n = std::min(max_position, one_shot.token_logprobs.size());
        for (std::size_t p = 0; p < n; ++p)
            diffs[p].push_back(one_shot.token_logprobs[p].logprob -
                               zero_shot.token_logprobs[p].logprob);
    }

    profile.medians.assign(max_position, std::numeric_limits<double>::quiet_NaN());
    profile.counts.assign(max_position, 0);
    for (std::size_t p = 0; p < max_position; ++p) {
        auto& v = diffs[p];
        profile.counts[p] = v.size();
        if (v.empty()) continue;
        std::sort(v.begin(), v.end());
        const std::size_t m = v.size() / 2;
        profile.medians[p] = v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
    }
    return profile;
}

}  // namespace osst
