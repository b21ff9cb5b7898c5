#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "backend.hpp"
#include "scoring.hpp"
#include "types.hpp"

namespace osst::testsupport {

struct TempDir {
    std::filesystem::path path;
    TempDir();
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
};

// Context-free mock: every code point is one token with logprob -ln(vocab).
class UniformBackend : public Backend {
public:
    explicit UniformBackend(std::size_t vocab_size);
    const BackendDescriptor& descriptor() const override { return descriptor_; }
    std::vector<TokenLogprob> echo_score(const EchoScoreRequest& req) const override;
    std::string generate(const std::string&) const override;

private:
    std::size_t vocab_size_;
    BackendDescriptor descriptor_;
};

// Independent recomputation of the mean span logprob under the offline
// n-gram semantics: plain map-of-strings count tables built from the corpus
// plus an incremental in-prompt cache (order >= 2 only). Kept deliberately
// separate from NgramBackend's implementation.
double oracle_ngram_span_mean(const std::vector<std::string>& corpus_texts, int order,
                              const std::string& prompt, std::size_t span_start,
                              std::size_t span_end);

struct SyntheticCorpus {
    Corpus training;                 // candidates with author map, ids a<k>/t<i>
    std::vector<Document> targets;   // ids target<k>-<i>, author recorded in author_id
    std::vector<std::string> all_texts() const;
};

// Five distinct character-level sources over a shared alphabet: author k
// prefers the successor shifted by 1+2k, so preferred bigram sets are
// disjoint. Deterministic in the seed.
SyntheticCorpus make_synthetic(int n_authors = 5, int n_train = 10, int n_targets = 10,
                               std::uint64_t seed = 42, int words_per_text = 30);

// Neutralize documents with the given backend (offline rule-based path).
std::vector<Styled> styled_all(const std::vector<Document>& docs, const Backend& backend);
Styled styled_one(const Document& doc, const Backend& backend);

}  // namespace osst::testsupport
