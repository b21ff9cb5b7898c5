#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "types.hpp"
#include "verification.hpp"

namespace osst {

enum class Cleaner { None, Fanfiction, Emails, StyleChange };

Cleaner cleaner_from_name(const std::string& name);

// Drop lines without an alphabetic character, join lines with single spaces,
// truncate at paragraph granularity (blank-line boundaries) to at most 384
// whitespace tokens, appending whole paragraphs while they fit.
std::string clean_fanfiction(const std::string& text);

// Trim, truncate to 384 whitespace tokens, reject results under 20 characters.
std::optional<std::string> clean_emails(const std::string& text);

// Reject paragraphs with no alphabetic character; otherwise unchanged.
std::optional<std::string> clean_style_change(const std::string& text);

std::optional<std::string> apply_cleaner(Cleaner cleaner, const std::string& text);

// Keep the first `max_per_author` documents per author, in corpus order.
Corpus cap_author_texts(const Corpus& corpus, std::size_t max_per_author = 50);

struct AttributionDataset {
    Corpus corpus;                   // candidate texts with the author map
    std::vector<Document> targets;   // documents from the unknown folder
    std::map<std::string, std::string> ground_truth;  // target id -> author id (may be empty)
};

// pan_folders layout: <root>/<candidate-id>/*.txt, <root>/unknown/*.txt,
// optional <root>/ground-truth.json. Deterministic: folders and files are
// read in sorted order.
AttributionDataset load_attribution_dir(const std::string& path, Cleaner cleaner);

struct VerificationDataset {
    std::vector<VerificationInstance> instances;
    std::vector<Document> documents;  // ids "<pair-id>/a" and "<pair-id>/b"
};

// JSONL, one {"id": str, "pair": [str, str], "same": bool?} per line.
VerificationDataset load_verification_jsonl(const std::string& path,
                                            Cleaner cleaner = Cleaner::None);

}  // namespace osst
