#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "types.hpp"

namespace osst {

enum class BackendKind { RemoteHttp, OfflineNgram };

struct BackendDescriptor {
    BackendKind kind = BackendKind::OfflineNgram;
    std::string model_id;
    std::optional<std::string> endpoint;
    std::map<std::string, json> request_params;

    void validate() const;
    // Stable identity string hashed into cache keys and fingerprints.
    std::string canonical() const;
};

struct EchoScoreRequest {
    std::string full_prompt;
    std::size_t span_start = 0;
    std::size_t span_end = 0;

    void validate() const;
};

class Backend {
public:
    virtual ~Backend() = default;

    virtual const BackendDescriptor& descriptor() const = 0;

    // Per-token log-probabilities for the tokens whose start offset lies in
    // [span_start, span_end). Natural log.
    virtual std::vector<TokenLogprob> echo_score(const EchoScoreRequest& req) const = 0;

    // Instruction-following generation. Backends without this capability
    // throw a backend error.
    virtual std::string generate(const std::string& instruction_prompt) const = 0;

    std::string fingerprint() const;
};

}  // namespace osst
