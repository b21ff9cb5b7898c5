#include "neutralizer.hpp"

#include <atomic>
#include <cctype>
#include <mutex>
#include <thread>

#include "errors.hpp"
#include "text.hpp"

namespace osst {

std::string neutralization_prompt(const std::string& text, const std::string& template_version) {
    if (template_version != kNeutralTemplateVersion)
        throw usage_error("unknown neutralization template version: " + template_version);
    return "Rewrite the following text in a plain, neutral style. Preserve the meaning and the "
           "approximate length. Change only the style: remove distinctive word choices, "
           "punctuation habits, and formatting quirks. Reply with the rewritten text only.\n\n"
           "Text:\n" +
           text;
}

std::string rule_based_neutral(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    bool pending_space = false;
    const auto cps = text::decode_utf8(text);
    for (std::size_t i = 0; i < cps.size(); ++i) {
        const char32_t c = cps[i].value;
        if (c < 0x80 && std::isspace(static_cast<int>(c))) {
            pending_space = true;
            continue;
        }
        bool keep = true;
        if (c < 0x80 && std::ispunct(static_cast<int>(c))) {
            keep = false;
            if (c == U'.') {
                // sentence-final: next code point is whitespace (or end)
                const bool at_end = i + 1 == cps.size();
                const bool before_space = !at_end && cps[i + 1].value < 0x80 &&
                                          std::isspace(static_cast<int>(cps[i + 1].value));
                keep = at_end || before_space;
            }
        }
        if (!keep) continue;
        if (pending_space && !out.empty()) out.push_back(' ');
        pending_space = false;
        if (c < 0x80) {
            out.push_back(static_cast<char>(std::tolower(static_cast<int>(c))));
        } else {
            out.append(text, cps[i].offset, cps[i].nbytes);
        }
    }
    return out;
}

std::string neutralization_fingerprint(const Backend& backend,
                                       const std::string& template_version) {
    return text::sha256_hex(backend.descriptor().canonical() + "|template=" + template_version);
}

namespace {

std::string generate_neutral(const Document& doc, const Backend& backend,
                             const std::string& template_version) {
    if (backend.descriptor().kind == BackendKind::OfflineNgram) {
        std::string neutral = rule_based_neutral(doc.text);
        if (neutral.empty())
            throw backend_error("neutralization produced empty text for " + doc.id);
        return neutral;
    }
    const std::string prompt = neutralization_prompt(doc.text, template_version);
    std::string last_error;
    for (int attempt = 0; attempt < 2; ++attempt) {  // one retry on bad output
        std::string neutral = backend.generate(prompt);
        if (neutral.empty()) {
            last_error = "empty neutralization output";
            continue;
        }
        if (neutral.size() > 4 * doc.text.size()) {
            last_error = "neutral text longer than 4x the original";
            continue;
        }
        return neutral;
    }
    throw backend_error("neutralization failed for " + doc.id + ": " + last_error);
}

}  // namespace

NeutralizationRecord neutralize(const Document& doc, const Backend& backend,
                                const std::string& template_version, const Store* cache) {
    if (doc.text.empty()) throw usage_error("cannot neutralize empty document " + doc.id);

    const std::string fingerprint = neutralization_fingerprint(backend, template_version);
    const std::string key =
        Store::make_key({"neutralize", fingerprint, text::sha256_hex(doc.text)});

    if (cache) {
        if (auto hit = cache->get(key)) {
            NeutralizationRecord rec = hit->get<NeutralizationRecord>();
            rec.doc_id = doc.id;  // content-addressed: same text under another id reuses the rewrite
            return rec;
        }
    }

    NeutralizationRecord rec;
    rec.doc_id = doc.id;
    rec.generator_fingerprint = fingerprint;
    rec.neutral_text = generate_neutral(doc, backend, template_version);

    if (cache) cache->put(key, json(rec));
    return rec;
}

NeutralizeBatchResult neutralize_corpus(const Corpus& corpus, const Backend& backend,
                                        const std::string& template_version, const Store* cache,
                                        int concurrency) {
    NeutralizeBatchResult result;
    std::mutex mu;
    std::atomic<std::size_t> next{0};

    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= corpus.documents.size()) return;
            const Document& doc = corpus.documents[i];
            try {
                NeutralizationRecord rec = neutralize(doc, backend, template_version, cache);
                std::lock_guard<std::mutex> lock(mu);
                result.records.emplace(doc.id, std::move(rec));
            } catch (const std::exception& e) {
                std::lock_guard<std::mutex> lock(mu);
                result.failures.emplace_back(doc.id, e.what());
            }
        }
    };

    const int nthreads = std::max(1, std::min<int>(concurrency, corpus.documents.size()));
    if (nthreads == 1) {
        worker();
    } else {
        std::vector<std::thread> threads;
        for (int i = 0; i < nthreads; ++i) threads.emplace_back(worker);
        for (auto& t : threads) t.join();
    }

    result.batch_failed = !corpus.documents.empty() &&
                          result.failures.size() * 10 > corpus.documents.size();
    return result;
}

}  // namespace osst
