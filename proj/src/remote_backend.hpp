#pragma once

#include <memory>

#include "backend.hpp"
#include "transport.hpp"

namespace osst {

struct RetryPolicy {
    int max_attempts = 5;
    int initial_backoff_ms = 200;
    double multiplier = 2.0;
};

// Completions-protocol adapter: echo scoring via POST /completions with
// echo + logprobs + text offsets, generation via POST /chat/completions.
// Retries transport failures, 429 and 5xx with exponential backoff,
// honoring Retry-After. Bearer auth from OSST_API_KEY when set.
class RemoteBackend : public Backend {
public:
    RemoteBackend(BackendDescriptor descriptor, std::shared_ptr<Transport> transport,
                  RetryPolicy retry = {}, int max_in_flight = 4);

    const BackendDescriptor& descriptor() const override { return descriptor_; }
    std::vector<TokenLogprob> echo_score(const EchoScoreRequest& req) const override;
    std::string generate(const std::string& instruction_prompt) const override;

private:
    HttpResponse post_with_retry(const std::string& path, const json& body) const;

    BackendDescriptor descriptor_;
    std::shared_ptr<Transport> transport_;
    RetryPolicy retry_;
    struct Gate;
    std::shared_ptr<Gate> gate_;
};

}  // namespace osst
