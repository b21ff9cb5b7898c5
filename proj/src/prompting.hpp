#pragma once

#include <cstddef>
#include <string>

#include "types.hpp"

namespace osst {

inline constexpr const char* kLayoutVersion = "v1";

struct TransferPrompt {
    std::string full_text;
    std::size_t target_span_start = 0;
    std::size_t target_span_end = 0;
    std::string layout_version = kLayoutVersion;

    std::string_view target_slice() const {
        return std::string_view(full_text).substr(target_span_start,
                                                  target_span_end - target_span_start);
    }
};

// "Neutral text: {N(t1)}\nStyled text: {t1}\n\nNeutral text: {N(t2)}\nStyled text: {t2}"
// Span boundaries come from cumulative byte arithmetic, never substring search.
TransferPrompt build_one_shot(const Document& example, const NeutralizationRecord& example_rec,
                              const Document& target, const NeutralizationRecord& target_rec);

// "Neutral text: {N(t2)}\nStyled text: {t2}"
TransferPrompt build_zero_shot(const Document& target, const NeutralizationRecord& target_rec);

}  // namespace osst
