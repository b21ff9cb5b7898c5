#include "datasets.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "errors.hpp"
#include "text.hpp"

namespace fs = std::filesystem;

namespace osst {

namespace {

constexpr std::size_t kMaxTokens = 384;
constexpr std::size_t kMinEmailChars = 20;

// ASCII letters, plus anything at or above U+00C0 (letters of non-ASCII
// scripts; the U+00A0..U+00BF punctuation block stays non-alphabetic).
bool is_alpha_cp(char32_t c) {
    if (c < 0x80) return std::isalpha(static_cast<int>(c)) != 0;
    return c >= 0xC0;
}

bool has_alpha(const std::string& s) {
    for (const auto& cp : text::decode_utf8(s))
        if (is_alpha_cp(cp.value)) return true;
    return false;
}

std::vector<std::string> split_lines(const std::string& s) {
    std::vector<std::string> lines;
    std::string cur;
    for (char c : s) {
        if (c == '\n') {
            lines.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    lines.push_back(cur);
    return lines;
}

std::string join_tokens(const std::vector<std::string_view>& tokens, std::size_t n) {
    std::string out;
    for (std::size_t i = 0; i < n && i < tokens.size(); ++i) {
        if (!out.empty()) out.push_back(' ');
        out.append(tokens[i]);
    }
    return out;
}

}  // namespace

Cleaner cleaner_from_name(const std::string& name) {
    if (name == "none") return Cleaner::None;
    if (name == "fanfiction") return Cleaner::Fanfiction;
    if (name == "emails") return Cleaner::Emails;
    if (name == "style-change" || name == "style_change") return Cleaner::StyleChange;
    throw usage_error("unknown cleaner: " + name);
}

std::string clean_fanfiction(const std::string& input) {
    // paragraphs are blank-line separated; within one, non-alphabetic lines
    // go and the rest join with single spaces
    std::vector<std::string> paragraphs;
    std::string current;
    auto flush = [&] {
        if (!current.empty()) paragraphs.push_back(std::move(current));
        current.clear();
    };
    for (const auto& line : split_lines(input)) {
        if (text::trim(line).empty()) {
            flush();
            continue;
        }
        if (!has_alpha(line)) continue;
        const std::string piece = text::trim(line);
        if (!current.empty()) current.push_back(' ');
        current += piece;
    }
    flush();

    std::string out;
    std::size_t budget = kMaxTokens;
    for (const auto& p : paragraphs) {
        const auto tokens = text::whitespace_tokens(p);
        if (tokens.size() > budget) break;
        budget -= tokens.size();
        if (!out.empty()) out.push_back(' ');
        out += join_tokens(tokens, tokens.size());
    }
    return out;
}

std::optional<std::string> clean_emails(const std::string& input) {
    std::string trimmed = text::trim(input);
    const auto tokens = text::whitespace_tokens(trimmed);
    std::string result =
        tokens.size() > kMaxTokens ? join_tokens(tokens, kMaxTokens) : trimmed;
    if (text::decode_utf8(result).size() < kMinEmailChars) return std::nullopt;
    return result;
}

std::optional<std::string> clean_style_change(const std::string& text) {
    if (!has_alpha(text)) return std::nullopt;
    return text;
}

std::optional<std::string> apply_cleaner(Cleaner cleaner, const std::string& input) {
    switch (cleaner) {
        case Cleaner::None: {
            if (text::trim(input).empty()) return std::nullopt;
            return input;
        }
        case Cleaner::Fanfiction: {
            std::string out = clean_fanfiction(input);
            if (out.empty()) return std::nullopt;
            return out;
        }
        case Cleaner::Emails:
            return clean_emails(input);
        case Cleaner::StyleChange:
            return clean_style_change(input);
    }
    throw usage_error("bad cleaner");
}

Corpus cap_author_texts(const Corpus& corpus, std::size_t max_per_author) {
    Corpus out;
    std::set<std::string> kept;
    for (const auto& [author, doc_ids] : corpus.authors) {
        auto& list = out.authors[author];
        for (const auto& id : doc_ids) {
            if (list.size() >= max_per_author) break;
            list.push_back(id);
            kept.insert(id);
        }
    }
    for (const auto& d : corpus.documents) {
        const bool is_candidate = d.author_id.has_value();
        if (!is_candidate || kept.count(d.id)) out.documents.push_back(d);
    }
    return out;
}

namespace {

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw data_error("cannot read file: " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<fs::path> sorted_entries(const fs::path& dir, bool dirs_only) {
    std::vector<fs::path> out;
    for (const auto& e : fs::directory_iterator(dir)) {
        if (dirs_only ? e.is_directory() : e.is_regular_file()) out.push_back(e.path());
    }
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace

AttributionDataset load_attribution_dir(const std::string& path, Cleaner cleaner) {
    const fs::path root(path);
    if (!fs::is_directory(root)) throw data_error("not a directory: " + path);
    const fs::path unknown_dir = root / "unknown";
    if (!fs::is_directory(unknown_dir))
        throw data_error("missing unknown folder under " + path);

    AttributionDataset ds;
    for (const auto& author_dir : sorted_entries(root, /*dirs_only=*/true)) {
        const std::string author = author_dir.filename().string();
        if (author == "unknown") continue;
        std::vector<std::string> ids;
        for (const auto& file : sorted_entries(author_dir, /*dirs_only=*/false)) {
            if (file.extension() != ".txt") continue;
            auto cleaned = apply_cleaner(cleaner, read_file(file));
            if (!cleaned) continue;
            Document d;
            d.id = author + "/" + file.filename().string();
            d.text = *cleaned;
            d.author_id = author;
            ds.corpus.documents.push_back(std::move(d));
            ids.push_back(author + "/" + file.filename().string());
        }
        if (ids.empty()) throw data_error("candidate folder has no usable texts: " + author);
        ds.corpus.authors[author] = std::move(ids);
    }
    if (ds.corpus.authors.empty()) throw data_error("no candidate author folders under " + path);

    for (const auto& file : sorted_entries(unknown_dir, /*dirs_only=*/false)) {
        if (file.extension() != ".txt") continue;
        auto cleaned = apply_cleaner(cleaner, read_file(file));
        if (!cleaned) continue;
        Document d;
        d.id = "unknown/" + file.filename().string();
        d.text = *cleaned;
        ds.targets.push_back(std::move(d));
    }
    if (ds.targets.empty()) throw data_error("unknown folder has no usable texts under " + path);

    const fs::path gt = root / "ground-truth.json";
    if (fs::exists(gt)) {
        json j = json::parse(read_file(gt));
        if (j.contains("ground_truth")) {
            for (const auto& e : j.at("ground_truth"))
                ds.ground_truth["unknown/" + e.at("unknown-text").get<std::string>()] =
                    e.at("true-author").get<std::string>();
        } else {
            for (const auto& [k, v] : j.items())
                ds.ground_truth["unknown/" + k] = v.get<std::string>();
        }
    }
    ds.corpus.validate();
    return ds;
}

VerificationDataset load_verification_jsonl(const std::string& path, Cleaner cleaner) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open verification file: " + path);

    VerificationDataset ds;
    std::set<std::string> seen_ids;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (text::trim(line).empty()) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded() || !j.contains("id") || !j.contains("pair") ||
            !j.at("pair").is_array() || j.at("pair").size() != 2)
            throw data_error("malformed verification line " + std::to_string(lineno) + " in " +
                             path);
        const std::string id = j.at("id").get<std::string>();
        if (!seen_ids.insert(id).second)
            throw data_error("duplicate pair id '" + id + "' at line " + std::to_string(lineno));

        std::array<std::string, 2> texts;
        for (int k = 0; k < 2; ++k) {
            auto cleaned = apply_cleaner(cleaner, j.at("pair").at(k).get<std::string>());
            if (!cleaned)
                throw data_error("pair " + id + " text " + std::to_string(k + 1) +
                                 " rejected by cleaner (line " + std::to_string(lineno) + ")");
            texts[static_cast<std::size_t>(k)] = *cleaned;
        }

        VerificationInstance inst;
        inst.first_id = id + "/a";
        inst.second_id = id + "/b";
        if (j.contains("same") && !j.at("same").is_null())
            inst.same_author = j.at("same").get<bool>();
        ds.instances.push_back(inst);
        ds.documents.push_back({inst.first_id, texts[0], std::nullopt, std::nullopt, std::nullopt});
        ds.documents.push_back({inst.second_id, texts[1], std::nullopt, std::nullopt, std::nullopt});
    }
    return ds;
}

}  // namespace osst
