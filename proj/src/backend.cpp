#include "backend.hpp"

#include "errors.hpp"
#include "text.hpp"

namespace osst {

void BackendDescriptor::validate() const {
    if (kind == BackendKind::RemoteHttp && !endpoint)
        throw usage_error("remote_http backend requires an endpoint");
    if (kind == BackendKind::OfflineNgram && endpoint)
        throw usage_error("offline_ngram backend must not have an endpoint");
}

std::string BackendDescriptor::canonical() const {
    json params(request_params);  // std::map keeps keys sorted
    std::string s = kind == BackendKind::RemoteHttp ? "remote_http" : "offline_ngram";
    s += "|" + model_id + "|" + (endpoint ? *endpoint : "") + "|" + params.dump();
    return s;
}

void EchoScoreRequest::validate() const {
    if (span_start >= span_end) throw usage_error("echo score span is empty");
    if (span_end > full_prompt.size()) throw usage_error("echo score span out of range");
    if (!text::is_utf8_boundary(full_prompt, span_start) ||
        !text::is_utf8_boundary(full_prompt, span_end))
        throw usage_error("echo score span not on UTF-8 boundaries");
}

std::string Backend::fingerprint() const {
    return text::sha256_hex(descriptor().canonical());
}

}  // namespace osst
