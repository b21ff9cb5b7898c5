#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "backend.hpp"

namespace osst {

// Deterministic character-level n-gram model with add-one smoothing over the
// training alphabet plus a reserved UNK symbol. Orders >= 2 additionally
// count n-grams seen earlier in the scored prompt, so a one-shot example in
// the prompt genuinely shifts the conditional distribution of the target
// span. Order 1 has no context and stays purely the trained table.
class NgramBackend : public Backend {
public:
    NgramBackend(const std::vector<std::string>& corpus_texts, int order);

    const BackendDescriptor& descriptor() const override { return descriptor_; }
    std::vector<TokenLogprob> echo_score(const EchoScoreRequest& req) const override;
    std::string generate(const std::string& instruction_prompt) const override;

    int order() const { return order_; }
    // Alphabet size including UNK.
    std::size_t alphabet_size() const { return alphabet_size_; }

    // Trained conditional probability P(symbol | context), no prompt cache.
    // Unknown characters map to UNK. Context is truncated to order-1 tail.
    double trained_prob(const std::string& context_utf8, const std::string& symbol_utf8) const;

private:
    using IdString = std::u32string;  // symbol ids packed as char32_t

    struct Counts {
        std::unordered_map<IdString, std::uint64_t> grams;  // lengths 1..order
        std::unordered_map<IdString, std::uint64_t> continuations;  // ctx lengths 0..order-1
        void add(const std::vector<char32_t>& ids, int order);
    };

    char32_t id_of(char32_t cp) const;
    std::vector<char32_t> map_ids(const std::string& utf8) const;
    double conditional(const IdString& ctx, char32_t sym, const Counts* cache) const;

    int order_;
    std::size_t alphabet_size_;
    std::unordered_map<char32_t, char32_t> alphabet_;
    char32_t unk_id_;
    Counts trained_;
    BackendDescriptor descriptor_;
};

}  // namespace osst
