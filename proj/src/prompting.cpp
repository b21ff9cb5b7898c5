#include "prompting.hpp"

#include "errors.hpp"

namespace osst {

namespace {

constexpr const char* kNeutralLabel = "Neutral text: ";
constexpr const char* kStyledLabel = "Styled text: ";

void check_pair(const Document& doc, const NeutralizationRecord& rec) {
    if (doc.text.empty()) throw usage_error("cannot build prompt for empty document " + doc.id);
    if (rec.neutral_text.empty())
        throw usage_error("empty neutral text for document " + doc.id);
    if (rec.doc_id != doc.id)
        throw usage_error("neutralization record " + rec.doc_id + " does not match document " +
                          doc.id);
}

void append_pair(std::string& out, const std::string& neutral, const std::string& styled) {
    out += kNeutralLabel;
    out += neutral;
    out += '\n';
    out += kStyledLabel;
    out += styled;
}

}  // namespace

TransferPrompt build_one_shot(const Document& example, const NeutralizationRecord& example_rec,
                              const Document& target, const NeutralizationRecord& target_rec) {
    check_pair(example, example_rec);
    check_pair(target, target_rec);

    TransferPrompt p;
    append_pair(p.full_text, example_rec.neutral_text, example.text);
    p.full_text += "\n\n";
    append_pair(p.full_text, target_rec.neutral_text, target.text);
    p.target_span_end = p.full_text.size();
    p.target_span_start = p.target_span_end - target.text.size();
    return p;
}

TransferPrompt build_zero_shot(const Document& target, const NeutralizationRecord& target_rec) {
    check_pair(target, target_rec);

    TransferPrompt p;
    append_pair(p.full_text, target_rec.neutral_text, target.text);
    p.target_span_end = p.full_text.size();
    p.target_span_start = p.target_span_end - target.text.size();
    return p;
}

}  // namespace osst
