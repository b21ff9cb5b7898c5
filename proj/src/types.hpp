#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

namespace osst {

using json = nlohmann::json;

struct Document {
    std::string id;
    std::string text;
    std::optional<std::string> author_id;
    std::optional<std::string> collection_id;
    std::optional<std::string> lang;
};

struct Corpus {
    std::vector<Document> documents;
    // author_id -> document ids, insertion order preserved for documents
    std::map<std::string, std::vector<std::string>> authors;

    const Document& doc(const std::string& id) const;
    const Document* find(const std::string& id) const;
    void validate() const;
};

struct NeutralizationRecord {
    std::string doc_id;
    std::string neutral_text;
    std::string generator_fingerprint;
};

struct TokenLogprob {
    std::string token_text;
    double logprob = 0.0;
    std::size_t byte_offset = 0;
};

struct TransferScore {
    std::string target_doc_id;
    std::optional<std::string> conditioning_doc_id;
    std::vector<TokenLogprob> token_logprobs;
    double mean_logprob = 0.0;
};

struct ScoreTable {
    std::vector<std::string> target_ids;
    std::vector<std::string> candidate_ids;
    std::vector<std::vector<double>> values;  // row = target, col = candidate text

    std::size_t target_index(const std::string& id) const;
    std::size_t candidate_index(const std::string& id) const;
    void validate() const;
};

struct CalibrationResult {
    double threshold = 0.0;  // may be +-inf sentinel in degenerate cases
    double objective_value = 0.0;
    std::string objective_name;
    std::size_t n_calibration = 0;
};

double mean_of(const std::vector<TokenLogprob>& toks);

// +-inf encode as the strings "inf" / "-inf" so thresholds survive JSON.
json encode_real(double v);
double decode_real(const json& j);

void to_json(json& j, const Document& d);
void from_json(const json& j, Document& d);
void to_json(json& j, const Corpus& c);
void from_json(const json& j, Corpus& c);
void to_json(json& j, const NeutralizationRecord& r);
void from_json(const json& j, NeutralizationRecord& r);
void to_json(json& j, const TokenLogprob& t);
void from_json(const json& j, TokenLogprob& t);
void to_json(json& j, const TransferScore& s);
void from_json(const json& j, TransferScore& s);
void to_json(json& j, const ScoreTable& t);
void from_json(const json& j, ScoreTable& t);
void to_json(json& j, const CalibrationResult& r);
void from_json(const json& j, CalibrationResult& r);

}  // namespace osst
