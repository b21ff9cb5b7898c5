#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "backend.hpp"
#include "store.hpp"
#include "types.hpp"

namespace osst {

inline constexpr const char* kNeutralTemplateVersion = "v1";

// Instantiate the versioned neutralization instruction for one text.
std::string neutralization_prompt(const std::string& text, const std::string& template_version);

// Deterministic style-destroying transform used with the offline backend:
// lowercase, collapse whitespace runs, drop punctuation except sentence-final
// periods (a '.' followed by whitespace or end of text).
std::string rule_based_neutral(const std::string& text);

// Fingerprint of the generation configuration (backend + template + params).
std::string neutralization_fingerprint(const Backend& backend,
                                       const std::string& template_version);

// Cached: repeated calls with the same (doc content, fingerprint) return the
// stored record without touching the backend.
NeutralizationRecord neutralize(const Document& doc, const Backend& backend,
                                const std::string& template_version, const Store* cache);

struct NeutralizeBatchResult {
    std::map<std::string, NeutralizationRecord> records;
    std::vector<std::pair<std::string, std::string>> failures;  // doc_id, error
    // Set when more than 10% of the documents failed; partial records and
    // the failure report are still returned.
    bool batch_failed = false;
};

// Applies neutralize to every document; partial progress lands in the cache,
// so an interrupted batch resumes.
NeutralizeBatchResult neutralize_corpus(const Corpus& corpus, const Backend& backend,
                                        const std::string& template_version, const Store* cache,
                                        int concurrency = 1);

}  // namespace osst
