#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "osst.h"

using nlohmann::json;

namespace {

[[noreturn]] void die(int code, const std::string& message) {
    json err{{"error", {{"code", code}, {"message", message}}}};
    std::cerr << err.dump() << "\n";
    std::exit(code);
}

void check(int rc) {
    if (rc != OSST_OK) die(rc, osst_last_error());
}

json take(char* s) {
    json j = json::parse(s);
    osst_free_string(s);
    return j;
}

struct Options {
    std::string backend = "offline";
    std::string model;
    std::string endpoint;
    int order = 3;
    int concurrency = 4;
    std::string cache_dir;
    bool no_cache = false;
    std::string cleaner = "none";
    std::string output;
    std::string emit_csv;
    std::uint64_t seed = 42;
};

struct BackendHandle {
    osst_backend* ptr = nullptr;
    ~BackendHandle() { osst_backend_close(ptr); }
};

// The offline backend trains on every text the command loaded.
void open_backend(const Options& opts, const std::vector<std::string>& texts, BackendHandle& h) {
    if (opts.backend == "offline") {
        check(osst_backend_open_offline(json(texts).dump().c_str(), opts.order, &h.ptr));
    } else if (opts.backend == "remote") {
        if (opts.model.empty() || opts.endpoint.empty())
            die(2, "remote backend needs --model and --endpoint");
        json config{{"model_id", opts.model}, {"endpoint", opts.endpoint}};
        check(osst_backend_open_remote(config.dump().c_str(), &h.ptr));
    } else {
        die(2, "backend must be 'offline' or 'remote'");
    }
}

void attach_cache(const Options& opts, json& request) {
    if (!opts.no_cache && !opts.cache_dir.empty()) request["cache_dir"] = opts.cache_dir;
    request["concurrency"] = opts.concurrency;
}

void write_output(const Options& opts, const json& result) {
    if (opts.output.empty() || opts.output == "-") {
        std::cout << result.dump(2) << "\n";
        return;
    }
    std::ofstream out(opts.output);
    if (!out) die(4, "cannot write output file: " + opts.output);
    out << result.dump(2) << "\n";
}

std::string csv_field(const json& v) {
    std::string s = v.is_string() ? v.get<std::string>() : (v.is_null() ? "" : v.dump());
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string quoted = "\"";
    for (char c : s) {
        if (c == '"') quoted += "\"\"";
        else quoted.push_back(c);
    }
    return quoted + "\"";
}

void write_csv(const std::string& path, const std::vector<std::vector<json>>& rows) {
    std::ofstream out(path);
    if (!out) die(4, "cannot write csv file: " + path);
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ",";
            out << csv_field(row[i]);
        }
        out << "\n";
    }
}

// --- data loading -----------------------------------------------------------

struct Loaded {
    json documents = json::array();  // every document the command touches
    json records;                    // doc_id -> neutralization record
};

std::vector<std::string> texts_of(const json& documents) {
    std::vector<std::string> texts;
    for (const auto& d : documents) texts.push_back(d.at("text").get<std::string>());
    return texts;
}

json neutralize_documents(const Options& opts, osst_backend* backend, const json& documents) {
    json corpus{{"documents", documents}, {"authors", json::object()}};
    json options = json::object();
    attach_cache(opts, options);
    char* out = nullptr;
    check(osst_neutralize_corpus(backend, corpus.dump().c_str(), options.dump().c_str(), &out));
    json result = take(out);
    if (result.at("batch_failed").get<bool>())
        die(3, "neutralization failed for too many documents: " +
                   result.at("failures").dump());
    for (const auto& f : result.at("failures"))
        die(3, "neutralization failed for " + f[0].get<std::string>() + ": " +
                   f[1].get<std::string>());
    return result.at("records");
}

json styled_of(const json& doc, const json& records) {
    const std::string id = doc.at("id").get<std::string>();
    if (!records.contains(id)) die(5, "missing neutralization record for " + id);
    return json{{"doc", doc}, {"rec", records.at(id)}};
}

json load_attribution(const Options& opts, const std::string& dir) {
    char* out = nullptr;
    check(osst_load_attribution_dir(dir.c_str(), opts.cleaner.c_str(), &out));
    return take(out);
}

json load_pairs(const Options& opts, const std::string& path) {
    char* out = nullptr;
    check(osst_load_verification_jsonl(path.c_str(), opts.cleaner.c_str(), &out));
    return take(out);
}

json verification_pairs(const json& dataset, const json& records) {
    json by_id = json::object();
    for (const auto& d : dataset.at("documents"))
        by_id[d.at("id").get<std::string>()] = d;
    json pairs = json::array();
    for (const auto& inst : dataset.at("instances")) {
        json p{{"first", styled_of(by_id.at(inst.at("first").get<std::string>()), records)},
               {"second", styled_of(by_id.at(inst.at("second").get<std::string>()), records)}};
        if (inst.contains("same")) p["same"] = inst.at("same");
        pairs.push_back(std::move(p));
    }
    return pairs;
}

// --- commands ----------------------------------------------------------------

void cmd_neutralize(const Options& opts, const std::string& data_dir,
                    const std::string& pairs_file) {
    json documents = json::array();
    if (!data_dir.empty()) {
        json ds = load_attribution(opts, data_dir);
        for (const auto& d : ds.at("corpus").at("documents")) documents.push_back(d);
        for (const auto& d : ds.at("targets")) documents.push_back(d);
    } else if (!pairs_file.empty()) {
        documents = load_pairs(opts, pairs_file).at("documents");
    } else {
        die(2, "neutralize needs --data or --pairs");
    }
    BackendHandle backend;
    open_backend(opts, texts_of(documents), backend);
    json records = neutralize_documents(opts, backend.ptr, documents);
    write_output(opts, json{{"records", records}});
    if (!opts.emit_csv.empty()) {
        std::vector<std::vector<json>> rows{{"doc_id", "neutral_text", "generator_fingerprint"}};
        for (const auto& [id, rec] : records.items())
            rows.push_back({id, rec.at("neutral_text"), rec.at("generator_fingerprint")});
        write_csv(opts.emit_csv, rows);
    }
}

struct ScoredDataset {
    json dataset;
    json table;
};

ScoredDataset score_attribution(const Options& opts, const std::string& data_dir) {
    json ds = load_attribution(opts, data_dir);
    json documents = json::array();
    for (const auto& d : ds.at("corpus").at("documents")) documents.push_back(d);
    for (const auto& d : ds.at("targets")) documents.push_back(d);

    BackendHandle backend;
    open_backend(opts, texts_of(documents), backend);
    json records = neutralize_documents(opts, backend.ptr, documents);

    json request{{"targets", json::array()}, {"candidates", json::array()}};
    for (const auto& d : ds.at("targets")) request["targets"].push_back(styled_of(d, records));
    for (const auto& d : ds.at("corpus").at("documents"))
        request["candidates"].push_back(styled_of(d, records));
    attach_cache(opts, request);

    char* out = nullptr;
    check(osst_score_table(backend.ptr, request.dump().c_str(), &out));
    return {std::move(ds), take(out)};
}

void cmd_score(const Options& opts, const std::string& data_dir) {
    ScoredDataset scored = score_attribution(opts, data_dir);
    write_output(opts, scored.table);
    if (!opts.emit_csv.empty()) {
        std::vector<std::vector<json>> rows;
        std::vector<json> header{"target_id"};
        for (const auto& c : scored.table.at("candidates")) header.push_back(c);
        rows.push_back(header);
        const auto& targets = scored.table.at("targets");
        const auto& values = scored.table.at("values");
        for (std::size_t i = 0; i < targets.size(); ++i) {
            std::vector<json> row{targets[i]};
            for (const auto& v : values[i]) row.push_back(v);
            rows.push_back(row);
        }
        write_csv(opts.emit_csv, rows);
    }
}

void cmd_attribute(const Options& opts, const std::string& data_dir, const std::string& mode,
                   std::optional<double> threshold) {
    ScoredDataset scored = score_attribution(opts, data_dir);
    json target_ids = json::array();
    for (const auto& d : scored.dataset.at("targets")) target_ids.push_back(d.at("id"));

    json request{{"table", scored.table},
                 {"corpus", scored.dataset.at("corpus")},
                 {"target_ids", target_ids},
                 {"mode", mode},
                 {"ground_truth", scored.dataset.at("ground_truth")}};
    if (threshold) request["threshold"] = *threshold;

    char* out = nullptr;
    check(osst_attribute(request.dump().c_str(), &out));
    json result = take(out);
    result["table"] = scored.table;
    write_output(opts, result);
    if (!opts.emit_csv.empty()) {
        std::vector<std::vector<json>> rows{{"target_id", "predicted", "tie", "rank", "author",
                                             "score"}};
        for (const auto& r : result.at("results")) {
            int rank = 1;
            for (const auto& entry : r.at("ranking"))
                rows.push_back({r.at("target_id"), r.at("predicted"), r.at("tie"), rank++,
                                entry.at("author"), entry.at("score")});
        }
        write_csv(opts.emit_csv, rows);
    }
}

void cmd_verify(const Options& opts, const std::string& pairs_file,
                const std::string& anchors_file, const std::string& variant,
                std::optional<double> threshold, const std::string& objective) {
    json dataset = load_pairs(opts, pairs_file);
    json anchor_docs = json::array();
    if (!anchors_file.empty()) anchor_docs = load_pairs(opts, anchors_file).at("documents");

    json documents = dataset.at("documents");
    for (const auto& d : anchor_docs) documents.push_back(d);
    BackendHandle backend;
    open_backend(opts, texts_of(documents), backend);
    json records = neutralize_documents(opts, backend.ptr, documents);

    json request{{"pairs", verification_pairs(dataset, records)},
                 {"variant", variant},
                 {"objective", objective}};
    if (!anchor_docs.empty()) {
        request["anchors"] = json::array();
        for (const auto& d : anchor_docs) request["anchors"].push_back(styled_of(d, records));
    }
    if (threshold) request["threshold"] = *threshold;
    attach_cache(opts, request);

    char* out = nullptr;
    check(osst_verify(backend.ptr, request.dump().c_str(), &out));
    json result = take(out);
    write_output(opts, result);
    if (!opts.emit_csv.empty()) {
        std::vector<std::vector<json>> rows{{"first", "second", "score", "decision", "same"}};
        for (const auto& r : result.at("results"))
            rows.push_back({r.at("first"), r.at("second"), r.at("score"), r.at("decision"),
                            r.contains("same") ? r.at("same") : json(nullptr)});
        write_csv(opts.emit_csv, rows);
    }
}

void cmd_ablate(const Options& opts, const std::string& pairs_file,
                const std::string& eval_file, const std::string& anchors_file,
                std::vector<int> k_values, int pool_size, int repeats,
                const std::string& objective) {
    json calibration_ds = load_pairs(opts, pairs_file);
    json evaluation_ds = eval_file.empty() ? calibration_ds : load_pairs(opts, eval_file);
    json pool_docs = load_pairs(opts, anchors_file).at("documents");
    if (pool_size > 0 && static_cast<std::size_t>(pool_size) < pool_docs.size())
        pool_docs.erase(pool_docs.begin() + pool_size, pool_docs.end());

    json documents = json::array();
    for (const auto& d : calibration_ds.at("documents")) documents.push_back(d);
    if (!eval_file.empty())
        for (const auto& d : evaluation_ds.at("documents")) documents.push_back(d);
    for (const auto& d : pool_docs) documents.push_back(d);

    BackendHandle backend;
    open_backend(opts, texts_of(documents), backend);
    json records = neutralize_documents(opts, backend.ptr, documents);

    json pool = json::array();
    for (const auto& d : pool_docs) pool.push_back(styled_of(d, records));
    json request{{"calibration", verification_pairs(calibration_ds, records)},
                 {"evaluation", verification_pairs(evaluation_ds, records)},
                 {"pool", pool},
                 {"k_values", k_values},
                 {"repeats", repeats},
                 {"seed", opts.seed},
                 {"objective", objective}};
    attach_cache(opts, request);

    char* out = nullptr;
    check(osst_anchor_ablation(backend.ptr, request.dump().c_str(), &out));
    json result = take(out);
    write_output(opts, result);
    if (!opts.emit_csv.empty()) {
        std::vector<std::vector<json>> rows{{"k", "mean_objective", "std_objective"}};
        for (const auto& e : result.at("entries"))
            rows.push_back({e.at("k"), e.at("mean_objective"), e.at("std_objective")});
        write_csv(opts.emit_csv, rows);
    }
}

void cmd_diagnose(const Options& opts, const std::string& pairs_file, int max_position) {
    json dataset = load_pairs(opts, pairs_file);
    BackendHandle backend;
    open_backend(opts, texts_of(dataset.at("documents")), backend);
    json records = neutralize_documents(opts, backend.ptr, dataset.at("documents"));

    json pairs = json::array();
    for (const auto& p : verification_pairs(dataset, records))
        pairs.push_back(json{{"conditioning", p.at("first")}, {"target", p.at("second")}});
    json request{{"pairs", pairs}, {"max_position", max_position}};
    attach_cache(opts, request);

    char* out = nullptr;
    check(osst_position_profile(backend.ptr, request.dump().c_str(), &out));
    json result = take(out);
    write_output(opts, result);
    if (!opts.emit_csv.empty()) {
        std::vector<std::vector<json>> rows{{"position", "median", "count"}};
        const auto& medians = result.at("medians");
        const auto& counts = result.at("counts");
        for (std::size_t i = 0; i < medians.size(); ++i)
            rows.push_back({i, medians[i], counts[i]});
        write_csv(opts.emit_csv, rows);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"One-shot style transfer scoring for authorship analysis"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "Config file with key=value lines");

    Options opts;
    app.add_option("--backend", opts.backend, "Backend: offline or remote")
        ->check(CLI::IsMember({"offline", "remote"}));
    app.add_option("--model", opts.model, "Remote model id");
    app.add_option("--endpoint", opts.endpoint, "Remote endpoint URL");
    app.add_option("--order", opts.order, "Offline n-gram order (1..5)");
    app.add_option("--concurrency", opts.concurrency, "Parallel scoring requests");
    app.add_option("--cache-dir", opts.cache_dir, "Cache directory for resumable runs");
    app.add_flag("--no-cache", opts.no_cache, "Disable the cache");
    app.add_option("--cleaner", opts.cleaner,
                   "Dataset cleaner: none, fanfiction, emails, style-change");
    app.add_option("--output,-o", opts.output, "Output file (default stdout)");
    app.add_option("--emit-csv", opts.emit_csv, "Also write a CSV summary to this file");
    app.add_option("--seed", opts.seed, "Random seed for anchor draws");

    std::string data_dir, pairs_file, eval_file, anchors_file;
    std::string mode = "closed", variant = "zs", objective = "macro_f1";
    double threshold_value = 0.0;
    int max_position = 50, pool_size = 0, repeats = 5;
    std::vector<int> k_values = {0, 1, 2, 4};

    auto* neutralize = app.add_subcommand("neutralize", "Neutralize dataset texts");
    neutralize->add_option("--data", data_dir, "Attribution dataset directory");
    neutralize->add_option("--pairs", pairs_file, "Verification JSONL file");

    auto* score = app.add_subcommand("score", "Compute the transfer-score table");
    score->add_option("--data", data_dir, "Attribution dataset directory")->required();

    auto* attribute = app.add_subcommand("attribute", "Closed- or open-set attribution");
    attribute->add_option("--data", data_dir, "Attribution dataset directory")->required();
    attribute->add_option("--mode", mode, "closed or open")
        ->check(CLI::IsMember({"closed", "open"}));
    auto* attr_threshold =
        attribute->add_option("--threshold", threshold_value, "Open-set rejection threshold");

    auto* verify = app.add_subcommand("verify", "Same-author verification over pairs");
    verify->add_option("--pairs", pairs_file, "Verification JSONL file")->required();
    verify->add_option("--anchors", anchors_file, "JSONL file providing anchor texts");
    verify->add_option("--variant", variant, "Score variant: zs or rs")
        ->check(CLI::IsMember({"zs", "rs"}));
    auto* verify_threshold =
        verify->add_option("--threshold", threshold_value,
                           "Fixed decision threshold (default: calibrate on labeled pairs)");
    verify->add_option("--objective", objective, "macro_f1 or f1_positive");

    auto* ablate = app.add_subcommand("ablate-anchors", "Anchor-count ablation study");
    ablate->add_option("--pairs", pairs_file, "Calibration pairs JSONL")->required();
    ablate->add_option("--eval-pairs", eval_file,
                       "Evaluation pairs JSONL (default: the calibration pairs)");
    ablate->add_option("--anchors", anchors_file, "JSONL file providing the anchor pool")
        ->required();
    ablate->add_option("--pool-size", pool_size, "Cap the anchor pool (max 10)");
    ablate->add_option("--k", k_values, "Anchor counts to test");
    ablate->add_option("--repeats", repeats, "Runs per anchor count");
    ablate->add_option("--objective", objective, "macro_f1 or f1_positive");

    auto* diagnose = app.add_subcommand("diagnose-positions",
                                        "Per-position one-shot vs zero-shot medians");
    diagnose->add_option("--pairs", pairs_file, "Verification JSONL file")->required();
    diagnose->add_option("--max-position", max_position, "Number of positions to profile");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        die(2, e.what());
    }

    try {
        if (neutralize->parsed()) {
            cmd_neutralize(opts, data_dir, pairs_file);
        } else if (score->parsed()) {
            cmd_score(opts, data_dir);
        } else if (attribute->parsed()) {
            std::optional<double> threshold;
            if (attr_threshold->count()) threshold = threshold_value;
            cmd_attribute(opts, data_dir, mode, threshold);
        } else if (verify->parsed()) {
            std::optional<double> threshold;
            if (verify_threshold->count()) threshold = threshold_value;
            cmd_verify(opts, pairs_file, anchors_file, variant, threshold, objective);
        } else if (ablate->parsed()) {
            cmd_ablate(opts, pairs_file, eval_file, anchors_file, k_values, pool_size, repeats,
                       objective);
        } else if (diagnose->parsed()) {
            cmd_diagnose(opts, pairs_file, max_position);
        }
    } catch (const json::exception& e) {
        die(5, std::string("unexpected response shape: ") + e.what());
    }
    return 0;
}
