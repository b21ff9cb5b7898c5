#pragma once

#include <string>
#include <vector>

#include "backend.hpp"
#include "prompting.hpp"
#include "store.hpp"
#include "types.hpp"

namespace osst {

// A document together with its neutral-style rewrite.
struct Styled {
    Document doc;
    NeutralizationRecord rec;
};

void to_json(json& j, const Styled& s);
void from_json(const json& j, Styled& s);

struct ScoringContext {
    const Backend& backend;
    const Store* cache = nullptr;  // null disables caching
    int concurrency = 1;
};

// Mean per-token log-probability of the target text in the one-shot
// transfer prompt conditioned on `conditioning`.
TransferScore osst_score(const ScoringContext& ctx, const Styled& conditioning,
                         const Styled& target);

// Same for the zero-shot prompt (no in-context example).
TransferScore zero_shot_logprob(const ScoringContext& ctx, const Styled& target);

double nosst_zs(const ScoringContext& ctx, const Styled& conditioning, const Styled& target);

// Anchors must differ by id from both the target and the conditioning text.
double nosst_rs(const ScoringContext& ctx, const Styled& conditioning, const Styled& target,
                const std::vector<Styled>& anchors);

enum class Variant { Zs, Rs };

// 0.5 * (nOSST(t1|t2) + nOSST(t2|t1)); both directions computed explicitly.
double symmetric_score(const ScoringContext& ctx, const Styled& t1, const Styled& t2,
                       Variant variant, const std::vector<Styled>& anchors = {});

// values[i][j] = osst(target_i | candidate_j).mean_logprob. Bounded-parallel,
// every cell individually cached, so interrupted runs resume.
ScoreTable score_table(const ScoringContext& ctx, const std::vector<Styled>& targets,
                       const std::vector<Styled>& candidates);

}  // namespace osst
