#include "ngram_backend.hpp"

#include <cmath>

#include "errors.hpp"
#include "text.hpp"

namespace osst {

void NgramBackend::Counts::add(const std::vector<char32_t>& ids, int order) {
    for (std::size_t i = 0; i < ids.size(); ++i) {
        for (int n = 1; n <= order; ++n) {
            if (i + 1 < static_cast<std::size_t>(n)) break;
            IdString g(ids.begin() + (i + 1 - n), ids.begin() + (i + 1));
            grams[g] += 1;
            continuations[g.substr(0, g.size() - 1)] += 1;
        }
    }
}

NgramBackend::NgramBackend(const std::vector<std::string>& corpus_texts, int order)
    : order_(order) {
    if (corpus_texts.empty()) throw usage_error("offline backend needs a non-empty corpus");
    if (order < 1 || order > 5) throw usage_error("offline backend order must be in [1, 5]");

    std::string joined;
    for (const auto& t : corpus_texts) {
        joined += t;
        joined.push_back('\x1e');  // record separator, keeps the corpus hash unambiguous
        for (const auto& cp : text::decode_utf8(t)) {
            if (!alphabet_.count(cp.value))
                alphabet_.emplace(cp.value, static_cast<char32_t>(alphabet_.size()));
        }
    }
    if (alphabet_.empty()) throw usage_error("offline backend corpus has no characters");
    unk_id_ = static_cast<char32_t>(alphabet_.size());
    alphabet_size_ = alphabet_.size() + 1;

    for (const auto& t : corpus_texts) trained_.add(map_ids(t), order_);

    descriptor_.kind = BackendKind::OfflineNgram;
    descriptor_.model_id =
        "offline-ngram/o" + std::to_string(order_) + "/" + text::sha256_hex(joined);
    descriptor_.request_params["order"] = order_;
}

char32_t NgramBackend::id_of(char32_t cp) const {
    auto it = alphabet_.find(cp);
    return it == alphabet_.end() ? unk_id_ : it->second;
}

std::vector<char32_t> NgramBackend::map_ids(const std::string& utf8) const {
    std::vector<char32_t> out;
    for (const auto& cp : text::decode_utf8(utf8)) out.push_back(id_of(cp.value));
    return out;
}

double NgramBackend::conditional(const IdString& ctx, char32_t sym, const Counts* cache) const {
    auto count = [&](const IdString& g) -> std::uint64_t {
        std::uint64_t c = 0;
        auto it = trained_.grams.find(g);
        if (it != trained_.grams.end()) c += it->second;
        if (cache) {
            auto jt = cache->grams.find(g);
            if (jt != cache->grams.end()) c += jt->second;
        }
        return c;
    };
    std::uint64_t cont = 0;
    {
        auto it = trained_.continuations.find(ctx);
        if (it != trained_.continuations.end()) cont += it->second;
        if (cache) {
            auto jt = cache->continuations.find(ctx);
            if (jt != cache->continuations.end()) cont += jt->second;
        }
    }
    IdString g = ctx;
    g.push_back(sym);
    return (static_cast<double>(count(g)) + 1.0) /
           (static_cast<double>(cont) + static_cast<double>(alphabet_size_));
}

std::vector<TokenLogprob> NgramBackend::echo_score(const EchoScoreRequest& req) const {
    req.validate();
    const auto cps = text::decode_utf8(req.full_prompt);

    Counts cache;
    const bool adaptive = order_ >= 2;
    std::vector<char32_t> ids;
    ids.reserve(cps.size());

    std::vector<TokenLogprob> out;
    for (std::size_t i = 0; i < cps.size(); ++i) {
        const char32_t sym = id_of(cps[i].value);
        if (cps[i].offset >= req.span_start && cps[i].offset < req.span_end) {
            const std::size_t k = std::min<std::size_t>(order_ - 1, i);
            IdString ctx(ids.end() - static_cast<std::ptrdiff_t>(k), ids.end());
            TokenLogprob tok;
            tok.token_text = req.full_prompt.substr(cps[i].offset, cps[i].nbytes);
            tok.byte_offset = cps[i].offset;
            tok.logprob = std::log(conditional(ctx, sym, adaptive ? &cache : nullptr));
            out.push_back(std::move(tok));
        }
        ids.push_back(sym);
        if (adaptive) {
            // count the grams ending at position i, available from i+1 on
            for (int n = 1; n <= order_; ++n) {
                if (ids.size() < static_cast<std::size_t>(n)) break;
                IdString g(ids.end() - n, ids.end());
                cache.grams[g] += 1;
                cache.continuations[g.substr(0, g.size() - 1)] += 1;
            }
        }
    }
    if (out.empty()) throw backend_error("echo score produced no tokens in span");
    return out;
}

std::string NgramBackend::generate(const std::string&) const {
    throw backend_error("offline n-gram backend does not support generation");
}

double NgramBackend::trained_prob(const std::string& context_utf8,
                                  const std::string& symbol_utf8) const {
    auto sym_ids = map_ids(symbol_utf8);
    if (sym_ids.size() != 1) throw usage_error("symbol must be a single character");
    auto ctx_ids = map_ids(context_utf8);
    const std::size_t k = std::min<std::size_t>(order_ - 1, ctx_ids.size());
    IdString ctx(ctx_ids.end() - static_cast<std::ptrdiff_t>(k), ctx_ids.end());
    return conditional(ctx, sym_ids[0], nullptr);
}

}  // namespace osst
