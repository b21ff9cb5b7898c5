#include "osst.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <optional>
#include <string>

#include "attribution.hpp"
#include "calibration.hpp"
#include "datasets.hpp"
#include "errors.hpp"
#include "metrics.hpp"
#include "neutralizer.hpp"
#include "ngram_backend.hpp"
#include "remote_backend.hpp"
#include "scoring.hpp"
#include "store.hpp"
#include "transport.hpp"
#include "verification.hpp"

using namespace osst;

struct osst_backend {
    std::unique_ptr<Backend> impl;
};

namespace {

thread_local std::string g_last_error;

int fail(ErrorKind kind, const std::string& message) {
    g_last_error = message;
    return static_cast<int>(kind);
}

template <typename Fn>
int guarded(Fn&& fn) {
    try {
        fn();
        return OSST_OK;
    } catch (const Error& e) {
        return fail(e.kind(), e.what());
    } catch (const json::exception& e) {
        return fail(ErrorKind::Usage, std::string("bad request JSON: ") + e.what());
    } catch (const std::exception& e) {
        return fail(ErrorKind::Internal, e.what());
    }
}

json parse_arg(const char* text, const char* what) {
    if (!text) throw usage_error(std::string(what) + " must not be null");
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw usage_error(std::string("malformed JSON in ") + what);
    return j;
}

void set_out(char** out, const json& value) {
    if (!out) throw usage_error("output pointer must not be null");
    const std::string text = value.dump();
    char* buf = static_cast<char*>(std::malloc(text.size() + 1));
    if (!buf) throw Error(ErrorKind::Internal, "out of memory");
    std::memcpy(buf, text.c_str(), text.size() + 1);
    *out = buf;
}

void set_out(char** out, const std::string& value) { set_out(out, json(value)); }

Backend& backend_of(const osst_backend* handle) {
    if (!handle || !handle->impl) throw usage_error("backend handle must not be null");
    return *handle->impl;
}

// Holds the optional cache so a ScoringContext built from request options
// stays valid for the duration of one call.
struct ContextBox {
    std::optional<Store> store;
    int concurrency = 1;

    ContextBox(const json& request) {
        if (request.contains("cache_dir") && !request.at("cache_dir").is_null())
            store.emplace(request.at("cache_dir").get<std::string>());
        if (request.contains("concurrency")) concurrency = request.at("concurrency").get<int>();
        if (concurrency < 1) throw usage_error("concurrency must be positive");
    }

    ScoringContext ctx(const Backend& backend) const {
        return ScoringContext{backend, store ? &*store : nullptr, concurrency};
    }
};

Objective objective_of(const json& request) {
    if (!request.contains("objective")) return Objective::MacroF1;
    return objective_from_name(request.at("objective").get<std::string>());
}

Variant variant_of(const json& request) {
    const std::string name = request.value("variant", "zs");
    if (name == "zs") return Variant::Zs;
    if (name == "rs") return Variant::Rs;
    throw usage_error("variant must be 'zs' or 'rs'");
}

std::vector<LabeledScore> labeled_scores_of(const json& instances) {
    std::vector<LabeledScore> out;
    for (const auto& i : instances)
        out.push_back({i.at("score").get<double>(), i.at("label").get<bool>()});
    return out;
}

}  // namespace

extern "C" {

const char* osst_version(void) { return "0.1.0"; }

const char* osst_last_error(void) { return g_last_error.c_str(); }

void osst_free_string(char* s) { std::free(s); }

int osst_backend_open_offline(const char* corpus_texts_json, int order, osst_backend** out) {
    return guarded([&] {
        if (!out) throw usage_error("output pointer must not be null");
        const auto texts = parse_arg(corpus_texts_json, "corpus_texts_json")
                               .get<std::vector<std::string>>();
        auto handle = std::make_unique<osst_backend>();
        handle->impl = std::make_unique<NgramBackend>(texts, order);
        *out = handle.release();
    });
}

int osst_backend_open_remote(const char* config_json, osst_backend** out) {
    return guarded([&] {
        if (!out) throw usage_error("output pointer must not be null");
        const json config = parse_arg(config_json, "config_json");
        BackendDescriptor d;
        d.kind = BackendKind::RemoteHttp;
        d.model_id = config.at("model_id").get<std::string>();
        d.endpoint = config.at("endpoint").get<std::string>();
        if (config.contains("request_params"))
            for (const auto& [k, v] : config.at("request_params").items())
                d.request_params[k] = v;
        RetryPolicy retry;
        if (config.contains("max_attempts")) retry.max_attempts = config.at("max_attempts");
        if (config.contains("initial_backoff_ms"))
            retry.initial_backoff_ms = config.at("initial_backoff_ms");
        const int in_flight = config.value("max_in_flight", 4);
        auto transport = std::make_shared<HttpTransport>(*d.endpoint);
        auto handle = std::make_unique<osst_backend>();
        handle->impl = std::make_unique<RemoteBackend>(d, transport, retry, in_flight);
        *out = handle.release();
    });
}

void osst_backend_close(osst_backend* backend) { delete backend; }

int osst_backend_fingerprint(const osst_backend* backend, char** out) {
    return guarded([&] { set_out(out, backend_of(backend).fingerprint()); });
}

int osst_neutralize_corpus(osst_backend* backend, const char* corpus_json,
                           const char* options_json, char** out) {
    return guarded([&] {
        const Corpus corpus = parse_arg(corpus_json, "corpus_json").get<Corpus>();
        const json options = options_json ? parse_arg(options_json, "options_json")
                                          : json::object();
        ContextBox box(options);
        auto result = neutralize_corpus(corpus, backend_of(backend), kNeutralTemplateVersion,
                                        box.store ? &*box.store : nullptr, box.concurrency);
        json records = json::object();
        for (const auto& [id, rec] : result.records) records[id] = rec;
        set_out(out, json{{"records", records},
                          {"failures", result.failures},
                          {"batch_failed", result.batch_failed}});
    });
}

int osst_score_table(osst_backend* backend, const char* request_json, char** out) {
    return guarded([&] {
        const json request = parse_arg(request_json, "request_json");
        ContextBox box(request);
        const auto targets = request.at("targets").get<std::vector<Styled>>();
        const auto candidates = request.at("candidates").get<std::vector<Styled>>();
        set_out(out, score_table(box.ctx(backend_of(backend)), targets, candidates));
    });
}

int osst_attribute(const char* request_json, char** out) {
    return guarded([&] {
        const json request = parse_arg(request_json, "request_json");
        const auto table = request.at("table").get<ScoreTable>();
        const auto corpus = request.at("corpus").get<Corpus>();
        const auto target_ids = request.at("target_ids").get<std::vector<std::string>>();
        const std::string mode = request.value("mode", "closed");
        if (mode != "closed" && mode != "open")
            throw usage_error("mode must be 'closed' or 'open'");
        std::optional<double> threshold;
        if (request.contains("threshold")) threshold = request.at("threshold").get<double>();
        if (mode == "open" && !threshold)
            throw usage_error("open-set attribution needs a threshold");

        std::map<std::string, std::string> ground_truth;
        if (request.contains("ground_truth"))
            ground_truth = request.at("ground_truth").get<std::map<std::string, std::string>>();

        json results = json::array();
        double correct = 0, judged = 0, rank_sum = 0, ranked = 0;
        for (const auto& id : target_ids) {
            AttributionResult r = mode == "closed"
                                      ? attribute_closed(table, corpus, id)
                                      : attribute_open(table, corpus, id, *threshold);
            results.push_back(r);
            auto gt = ground_truth.find(id);
            if (gt == ground_truth.end()) continue;
            const bool author_known = corpus.authors.count(gt->second) > 0;
            judged += 1;
            if (r.predicted ? (*r.predicted == gt->second) : !author_known) correct += 1;
            if (author_known) {
                std::vector<std::string> order;
                for (const auto& [a, s] : r.ranking) order.push_back(a);
                rank_sum += normalized_rank(order, gt->second, order.size());
                ranked += 1;
            }
        }
        json output{{"results", results}};
        if (judged > 0) {
            json metrics{{"accuracy", correct / judged}};
            if (ranked > 0) metrics["mean_normalized_rank"] = rank_sum / ranked;
            output["metrics"] = metrics;
        }
        set_out(out, output);
    });
}

int osst_calibrate(const char* request_json, char** out) {
    return guarded([&] {
        const json request = parse_arg(request_json, "request_json");
        set_out(out, calibrate_threshold(labeled_scores_of(request.at("instances")),
                                         objective_of(request)));
    });
}

int osst_verify(osst_backend* backend, const char* request_json, char** out) {
    return guarded([&] {
        const json request = parse_arg(request_json, "request_json");
        ContextBox box(request);
        const ScoringContext ctx = box.ctx(backend_of(backend));
        const Variant variant = variant_of(request);
        std::vector<Styled> anchors;
        if (request.contains("anchors"))
            anchors = request.at("anchors").get<std::vector<Styled>>();

        struct Scored {
            Styled first, second;
            std::optional<bool> same;
            double score = 0.0;
        };
        std::vector<Scored> scored;
        for (const auto& p : request.at("pairs")) {
            Scored s{p.at("first").get<Styled>(), p.at("second").get<Styled>(), {}, 0.0};
            if (p.contains("same") && !p.at("same").is_null()) s.same = p.at("same").get<bool>();
            s.score = symmetric_score(ctx, s.first, s.second, variant, anchors);
            scored.push_back(std::move(s));
        }

        json output = json::object();
        double threshold;
        if (request.contains("threshold")) {
            threshold = request.at("threshold").get<double>();
        } else {
            std::vector<LabeledScore> labeled;
            for (const auto& s : scored)
                if (s.same) labeled.push_back({s.score, *s.same});
            if (labeled.empty())
                throw usage_error("no threshold given and no labeled pairs to calibrate on");
            const CalibrationResult cal = calibrate_threshold(labeled, objective_of(request));
            threshold = cal.threshold;
            output["calibration"] = cal;
        }
        output["threshold"] = encode_real(threshold);

        json results = json::array();
        std::vector<bool> decisions, gold;
        for (const auto& s : scored) {
            const bool decision = s.score >= threshold;
            json r{{"first", s.first.doc.id},
                   {"second", s.second.doc.id},
                   {"score", s.score},
                   {"decision", decision}};
            if (s.same) {
                r["same"] = *s.same;
                decisions.push_back(decision);
                gold.push_back(*s.same);
            }
            results.push_back(std::move(r));
        }
        output["results"] = results;
        if (!gold.empty())
            output["metrics"] = json{{"macro_f1", binary_macro_f1(decisions, gold)},
                                     {"f1_positive", f1_positive(decisions, gold)}};
        set_out(out, output);
    });
}

int osst_anchor_ablation(osst_backend* backend, const char* request_json, char** out) {
    return guarded([&] {
        const json request = parse_arg(request_json, "request_json");
        ContextBox box(request);
        auto pairs_of = [](const json& arr) {
            std::vector<LabeledPair> pairs;
            for (const auto& p : arr)
                pairs.push_back({p.at("first").get<Styled>(), p.at("second").get<Styled>(),
                                 p.at("same").get<bool>()});
            return pairs;
        };
        auto entries = anchor_ablation(
            box.ctx(backend_of(backend)), pairs_of(request.at("calibration")),
            pairs_of(request.at("evaluation")), request.at("pool").get<std::vector<Styled>>(),
            request.at("k_values").get<std::vector<int>>(), request.at("repeats").get<int>(),
            request.at("seed").get<std::uint64_t>(), objective_of(request));
        json report = json::array();
        for (const auto& e : entries)
            report.push_back(json{{"k", e.k},
                                  {"mean_objective", e.mean_objective},
                                  {"std_objective", e.std_objective},
                                  {"per_run", e.per_run}});
        set_out(out, json{{"entries", report}});
    });
}

int osst_position_profile(osst_backend* backend, const char* request_json, char** out) {
    return guarded([&] {
        const json request = parse_arg(request_json, "request_json");
        ContextBox box(request);
        const ScoringContext ctx = box.ctx(backend_of(backend));
        std::vector<std::pair<TransferScore, TransferScore>> pairs;
        for (const auto& p : request.at("pairs")) {
            const auto conditioning = p.at("conditioning").get<Styled>();
            const auto target = p.at("target").get<Styled>();
            pairs.emplace_back(osst_score(ctx, conditioning, target),
                               zero_shot_logprob(ctx, target));
        }
        const PositionProfile profile =
            position_profile(pairs, request.at("max_position").get<std::size_t>());
        json medians = json::array();
        for (std::size_t i = 0; i < profile.medians.size(); ++i)
            medians.push_back(profile.counts[i] ? json(profile.medians[i]) : json(nullptr));
        set_out(out, json{{"medians", medians},
                          {"counts", profile.counts},
                          {"skipped_pairs", profile.skipped_pairs}});
    });
}

int osst_load_attribution_dir(const char* path, const char* cleaner, char** out) {
    return guarded([&] {
        if (!path) throw usage_error("path must not be null");
        auto ds = load_attribution_dir(path, cleaner_from_name(cleaner ? cleaner : "none"));
        set_out(out, json{{"corpus", ds.corpus},
                          {"targets", ds.targets},
                          {"ground_truth", ds.ground_truth}});
    });
}

int osst_load_verification_jsonl(const char* path, const char* cleaner, char** out) {
    return guarded([&] {
        if (!path) throw usage_error("path must not be null");
        auto ds = load_verification_jsonl(path, cleaner_from_name(cleaner ? cleaner : "none"));
        set_out(out, json{{"instances", ds.instances}, {"documents", ds.documents}});
    });
}

}  // extern "C"
