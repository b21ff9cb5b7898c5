#include "scoring.hpp"

#include <atomic>
#include <cmath>
#include <mutex>
#include <thread>

#include "errors.hpp"
#include "text.hpp"

namespace osst {

namespace {

void check_fingerprints(const Styled& a, const Styled& b) {
    if (a.rec.generator_fingerprint != b.rec.generator_fingerprint)
        throw usage_error("documents " + a.doc.id + " and " + b.doc.id +
                          " were neutralized under different fingerprints");
}

TransferScore score_prompt(const ScoringContext& ctx, const TransferPrompt& prompt,
                           const std::string& cache_key, const std::string& target_id,
                           const std::optional<std::string>& conditioning_id) {
    if (ctx.cache) {
        if (auto hit = ctx.cache->get(cache_key)) {
            TransferScore s = hit->get<TransferScore>();
            s.target_doc_id = target_id;
            s.conditioning_doc_id = conditioning_id;
            return s;
        }
    }

    EchoScoreRequest req{prompt.full_text, prompt.target_span_start, prompt.target_span_end};
    TransferScore s;
    s.target_doc_id = target_id;
    s.conditioning_doc_id = conditioning_id;
    s.token_logprobs = ctx.backend.echo_score(req);
    for (const auto& t : s.token_logprobs)
        if (!std::isfinite(t.logprob))
            throw backend_error("non-finite token logprob for target " + target_id);
    s.mean_logprob = mean_of(s.token_logprobs);

    if (ctx.cache) ctx.cache->put(cache_key, json(s));
    return s;
}

std::string styled_hash(const Styled& s) {
    return Store::make_key(
        {text::sha256_hex(s.doc.text), text::sha256_hex(s.rec.neutral_text),
         s.rec.generator_fingerprint});
}

}  // namespace

TransferScore osst_score(const ScoringContext& ctx, const Styled& conditioning,
                         const Styled& target) {
    check_fingerprints(conditioning, target);
    TransferPrompt prompt = build_one_shot(conditioning.doc, conditioning.rec, target.doc, target.rec);
    const std::string key =
        Store::make_key({"osst", ctx.backend.fingerprint(), prompt.layout_version,
                         styled_hash(conditioning), styled_hash(target)});
    return score_prompt(ctx, prompt, key, target.doc.id, conditioning.doc.id);
}

TransferScore zero_shot_logprob(const ScoringContext& ctx, const Styled& target) {
    TransferPrompt prompt = build_zero_shot(target.doc, target.rec);
    const std::string key = Store::make_key(
        {"osst-zs", ctx.backend.fingerprint(), prompt.layout_version, styled_hash(target)});
    return score_prompt(ctx, prompt, key, target.doc.id, std::nullopt);
}

double nosst_zs(const ScoringContext& ctx, const Styled& conditioning, const Styled& target) {
    return osst_score(ctx, conditioning, target).mean_logprob -
           zero_shot_logprob(ctx, target).mean_logprob;
}

double nosst_rs(const ScoringContext& ctx, const Styled& conditioning, const Styled& target,
                const std::vector<Styled>& anchors) {
    if (anchors.empty()) throw usage_error("nOSST-RS requires at least one anchor");
    for (const auto& a : anchors)
        if (a.doc.id == target.doc.id || a.doc.id == conditioning.doc.id)
            throw usage_error("anchor " + a.doc.id + " coincides with a scored document");

    double anchor_sum = 0.0;
    for (const auto& a : anchors) anchor_sum += osst_score(ctx, a, target).mean_logprob;
    return osst_score(ctx, conditioning, target).mean_logprob -
           anchor_sum / static_cast<double>(anchors.size());
}

double symmetric_score(const ScoringContext& ctx, const Styled& t1, const Styled& t2,
                       Variant variant, const std::vector<Styled>& anchors) {
    double a, b;
    if (variant == Variant::Zs) {
        a = nosst_zs(ctx, t2, t1);  // t1 as target
        b = nosst_zs(ctx, t1, t2);
    } else {
        a = nosst_rs(ctx, t2, t1, anchors);
        b = nosst_rs(ctx, t1, t2, anchors);
    }
    return 0.5 * (a + b);
}

ScoreTable score_table(const ScoringContext& ctx, const std::vector<Styled>& targets,
                       const std::vector<Styled>& candidates) {
    ScoreTable table;
    for (const auto& t : targets) table.target_ids.push_back(t.doc.id);
    for (const auto& c : candidates) table.candidate_ids.push_back(c.doc.id);
    table.values.assign(targets.size(), std::vector<double>(candidates.size(), 0.0));

    const std::size_t cells = targets.size() * candidates.size();
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::string first_error;
    std::mutex err_mu;

    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= cells || failed.load()) return;
            const std::size_t row = i / candidates.size();
            const std::size_t col = i % candidates.size();
            try {
                table.values[row][col] =
                    osst_score(ctx, candidates[col], targets[row]).mean_logprob;
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(err_mu);
                if (!failed.exchange(true)) first_error = e.what();
            }
        }
    };

    const int nthreads =
        std::max(1, std::min<int>(ctx.concurrency, static_cast<int>(cells ? cells : 1)));
    if (nthreads == 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        for (int i = 0; i < nthreads; ++i) threads.emplace_back(worker);
        for (auto& t : threads) t.join();
    }
    if (failed.load()) throw backend_error("score table computation failed: " + first_error);
    table.validate();
    return table;
}

void to_json(json& j, const Styled& s) { j = json{{"doc", s.doc}, {"rec", s.rec}}; }

void from_json(const json& j, Styled& s) {
    j.at("doc").get_to(s.doc);
    j.at("rec").get_to(s.rec);
}

}  // namespace osst
