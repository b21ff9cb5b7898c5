#include "support.hpp"

#include <cctype>
#include <cmath>
#include <filesystem>
#include <map>
#include <atomic>
#include <random>
#include <unistd.h>

#include "errors.hpp"
#include "neutralizer.hpp"
#include "text.hpp"

namespace osst::testsupport {

TempDir::TempDir() {
    static std::atomic<unsigned> counter{0};
    path = std::filesystem::temp_directory_path() /
           ("osst-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
    std::filesystem::create_directories(path);
}

TempDir::~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
}


UniformBackend::UniformBackend(std::size_t vocab_size) : vocab_size_(vocab_size) {
    descriptor_.kind = BackendKind::OfflineNgram;
    descriptor_.model_id = "uniform-mock/" + std::to_string(vocab_size);
}

std::vector<TokenLogprob> UniformBackend::echo_score(const EchoScoreRequest& req) const {
    req.validate();
    const double lp = -std::log(static_cast<double>(vocab_size_));
    std::vector<TokenLogprob> out;
    for (const auto& cp : text::decode_utf8(req.full_prompt)) {
        if (cp.offset < req.span_start || cp.offset >= req.span_end) continue;
        out.push_back({req.full_prompt.substr(cp.offset, cp.nbytes), lp, cp.offset});
    }
    if (out.empty()) throw backend_error("uniform mock: empty span");
    return out;
}

std::string UniformBackend::generate(const std::string&) const {
    throw backend_error("uniform mock does not generate");
}

double oracle_ngram_span_mean(const std::vector<std::string>& corpus_texts, int order,
                              const std::string& prompt, std::size_t span_start,
                              std::size_t span_end) {
    // alphabet: distinct corpus code points plus UNK
    std::map<char32_t, bool> alphabet;
    for (const auto& t : corpus_texts)
        for (const auto& cp : text::decode_utf8(t)) alphabet[cp.value] = true;
    const double a_size = static_cast<double>(alphabet.size()) + 1.0;
    const char32_t unk = 0xFFFFFFFF;

    auto canon = [&](char32_t c) { return alphabet.count(c) ? c : unk; };

    std::map<std::u32string, long> counts;  // grams of length 1..order
    for (const auto& t : corpus_texts) {
        std::u32string s;
        for (const auto& cp : text::decode_utf8(t)) s.push_back(cp.value);
        for (std::size_t i = 0; i < s.size(); ++i)
            for (int n = 1; n <= order && i + 1 >= static_cast<std::size_t>(n); ++n)
                counts[s.substr(i + 1 - n, n)] += 1;
    }

    std::map<std::u32string, long> cache;
    std::u32string seen;
    double sum = 0.0;
    long ntok = 0;
    for (const auto& cp : text::decode_utf8(prompt)) {
        const char32_t sym = canon(cp.value);
        if (cp.offset >= span_start && cp.offset < span_end) {
            const std::size_t k = std::min<std::size_t>(order - 1, seen.size());
            const std::u32string ctx = seen.substr(seen.size() - k);
            auto total = [&](const std::u32string& g) {
                long c = 0;
                if (auto it = counts.find(g); it != counts.end()) c += it->second;
                if (order >= 2)
                    if (auto it = cache.find(g); it != cache.end()) c += it->second;
                return c;
            };
            // continuation total: brute sum over the alphabet incl. UNK
            double denom = 0.0;
            for (const auto& [c, _] : alphabet) denom += total(ctx + std::u32string(1, c));
            denom += total(ctx + std::u32string(1, unk));
            sum += std::log((total(ctx + std::u32string(1, sym)) + 1.0) / (denom + a_size));
            ++ntok;
        }
        seen.push_back(sym);
        if (order >= 2)
            for (int n = 1; n <= order && seen.size() >= static_cast<std::size_t>(n); ++n)
                cache[seen.substr(seen.size() - n, n)] += 1;
    }
    if (ntok == 0) throw backend_error("oracle: empty span");
    return sum / static_cast<double>(ntok);
}

SyntheticCorpus make_synthetic(int n_authors, int n_train, int n_targets, std::uint64_t seed,
                               int words_per_text) {
    static const std::string alpha = "abcdefghij";
    std::mt19937_64 rng(seed);
    auto pick = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };

    auto gen_text = [&](int author) {
        std::string out;
        for (int w = 0; w < words_per_text; ++w) {
            if (w) out.push_back(' ');
            std::size_t c = pick(alpha.size());
            out.push_back(alpha[c]);
            for (int j = 0; j < 4; ++j) {
                if (rng() % 100 < 85)
                    c = (c + 1 + 2 * static_cast<std::size_t>(author)) % alpha.size();
                else
                    c = pick(alpha.size());
                out.push_back(alpha[c]);
            }
        }
        out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
        out.push_back('.');
        return out;
    };

    SyntheticCorpus sc;
    for (int a = 0; a < n_authors; ++a) {
        const std::string author = "a" + std::to_string(a);
        for (int i = 0; i < n_train; ++i) {
            Document d;
            d.id = author + "/t" + std::to_string(i);
            d.text = gen_text(a);
            d.author_id = author;
            sc.training.documents.push_back(d);
            sc.training.authors[author].push_back(d.id);
        }
    }
    for (int a = 0; a < n_authors; ++a) {
        const std::string author = "a" + std::to_string(a);
        for (int i = 0; i < n_targets; ++i) {
            Document d;
            d.id = "target" + std::to_string(a) + "-" + std::to_string(i);
            d.text = gen_text(a);
            d.author_id = author;
            sc.targets.push_back(d);
        }
    }
    return sc;
}

std::vector<std::string> SyntheticCorpus::all_texts() const {
    std::vector<std::string> out;
    for (const auto& d : training.documents) out.push_back(d.text);
    for (const auto& d : targets) out.push_back(d.text);
    return out;
}

std::vector<Styled> styled_all(const std::vector<Document>& docs, const Backend& backend) {
    std::vector<Styled> out;
    for (const auto& d : docs)
        out.push_back({d, neutralize(d, backend, kNeutralTemplateVersion, nullptr)});
    return out;
}

Styled styled_one(const Document& doc, const Backend& backend) {
    return {doc, neutralize(doc, backend, kNeutralTemplateVersion, nullptr)};
}

}  // namespace osst::testsupport
