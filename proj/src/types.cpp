#include "types.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "errors.hpp"

namespace osst {

const Document* Corpus::find(const std::string& id) const {
    for (const auto& d : documents)
        if (d.id == id) return &d;
    return nullptr;
}

const Document& Corpus::doc(const std::string& id) const {
    const Document* d = find(id);
    if (!d) throw data_error("unknown document id: " + id);
    return *d;
}

void Corpus::validate() const {
    std::set<std::string> ids;
    for (const auto& d : documents) {
        if (d.text.empty()) throw data_error("empty document text: " + d.id);
        if (!ids.insert(d.id).second) throw data_error("duplicate document id: " + d.id);
    }
    for (const auto& [author, doc_ids] : authors) {
        if (doc_ids.empty()) throw data_error("author with no documents: " + author);
        for (const auto& id : doc_ids)
            if (!ids.count(id)) throw data_error("author " + author + " references unknown document " + id);
    }
}

std::size_t ScoreTable::target_index(const std::string& id) const {
    auto it = std::find(target_ids.begin(), target_ids.end(), id);
    if (it == target_ids.end()) throw data_error("unknown target id: " + id);
    return static_cast<std::size_t>(it - target_ids.begin());
}

std::size_t ScoreTable::candidate_index(const std::string& id) const {
    auto it = std::find(candidate_ids.begin(), candidate_ids.end(), id);
    if (it == candidate_ids.end()) throw data_error("unknown candidate id: " + id);
    return static_cast<std::size_t>(it - candidate_ids.begin());
}

void ScoreTable::validate() const {
    if (values.size() != target_ids.size()) throw data_error("score table row count mismatch");
    for (const auto& row : values) {
        if (row.size() != candidate_ids.size()) throw data_error("score table column count mismatch");
        for (double v : row)
            if (!std::isfinite(v)) throw data_error("non-finite score table entry");
    }
}

double mean_of(const std::vector<TokenLogprob>& toks) {
    if (toks.empty()) throw data_error("mean over empty token list");
    double sum = 0.0;
    for (const auto& t : toks) sum += t.logprob;
    return sum / static_cast<double>(toks.size());
}

// +-inf thresholds are encoded as strings, JSON has no infinity literal.
json encode_real(double v) {
    if (std::isinf(v)) return v > 0 ? json("inf") : json("-inf");
    return json(v);
}

double decode_real(const json& j) {
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        throw data_error("bad real encoding: " + s);
    }
    return j.get<double>();
}

void to_json(json& j, const Document& d) {
    j = json{{"id", d.id}, {"text", d.text}};
    if (d.author_id) j["author_id"] = *d.author_id;
    if (d.collection_id) j["collection_id"] = *d.collection_id;
    if (d.lang) j["lang"] = *d.lang;
}

void from_json(const json& j, Document& d) {
    j.at("id").get_to(d.id);
    j.at("text").get_to(d.text);
    if (j.contains("author_id")) d.author_id = j.at("author_id").get<std::string>();
    if (j.contains("collection_id")) d.collection_id = j.at("collection_id").get<std::string>();
    if (j.contains("lang")) d.lang = j.at("lang").get<std::string>();
}

void to_json(json& j, const Corpus& c) {
    j = json{{"documents", c.documents}, {"authors", c.authors}};
}

void from_json(const json& j, Corpus& c) {
    j.at("documents").get_to(c.documents);
    if (j.contains("authors")) j.at("authors").get_to(c.authors);
}

void to_json(json& j, const NeutralizationRecord& r) {
    j = json{{"doc_id", r.doc_id},
             {"neutral_text", r.neutral_text},
             {"generator_fingerprint", r.generator_fingerprint}};
}

void from_json(const json& j, NeutralizationRecord& r) {
    j.at("doc_id").get_to(r.doc_id);
    j.at("neutral_text").get_to(r.neutral_text);
    j.at("generator_fingerprint").get_to(r.generator_fingerprint);
}

void to_json(json& j, const TokenLogprob& t) {
    j = json{{"token", t.token_text}, {"logprob", t.logprob}, {"offset", t.byte_offset}};
}

void from_json(const json& j, TokenLogprob& t) {
    j.at("token").get_to(t.token_text);
    j.at("logprob").get_to(t.logprob);
    j.at("offset").get_to(t.byte_offset);
}

void to_json(json& j, const TransferScore& s) {
    j = json{{"target_doc_id", s.target_doc_id},
             {"tokens", s.token_logprobs},
             {"mean_logprob", s.mean_logprob}};
    if (s.conditioning_doc_id) j["conditioning_doc_id"] = *s.conditioning_doc_id;
}

void from_json(const json& j, TransferScore& s) {
    j.at("target_doc_id").get_to(s.target_doc_id);
    j.at("tokens").get_to(s.token_logprobs);
    j.at("mean_logprob").get_to(s.mean_logprob);
    if (j.contains("conditioning_doc_id"))
        s.conditioning_doc_id = j.at("conditioning_doc_id").get<std::string>();
    else
        s.conditioning_doc_id.reset();
}

void to_json(json& j, const ScoreTable& t) {
    j = json{{"targets", t.target_ids}, {"candidates", t.candidate_ids}, {"values", t.values}};
}

void from_json(const json& j, ScoreTable& t) {
    j.at("targets").get_to(t.target_ids);
    j.at("candidates").get_to(t.candidate_ids);
    j.at("values").get_to(t.values);
}

void to_json(json& j, const CalibrationResult& r) {
    j = json{{"threshold", encode_real(r.threshold)},
             {"objective_value", r.objective_value},
             {"objective_name", r.objective_name},
             {"n_calibration", r.n_calibration}};
}

void from_json(const json& j, CalibrationResult& r) {
    r.threshold = decode_real(j.at("threshold"));
    j.at("objective_value").get_to(r.objective_value);
    j.at("objective_name").get_to(r.objective_name);
    j.at("n_calibration").get_to(r.n_calibration);
}

}  // namespace osst
