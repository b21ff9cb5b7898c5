#include "remote_backend.hpp"

#include <chrono>
#include <cmath>
#include <condition_variable>
#include <cstdlib>
#include <mutex>
#include <thread>

#include "errors.hpp"

namespace osst {

// Counting gate bounding in-flight requests across threads.
struct RemoteBackend::Gate {
    explicit Gate(int n) : slots(n) {}
    std::mutex mu;
    std::condition_variable cv;
    int slots;

    void acquire() {
        std::unique_lock<std::mutex> lock(mu);
        cv.wait(lock, [&] { return slots > 0; });
        --slots;
    }
    void release() {
        {
            std::lock_guard<std::mutex> lock(mu);
            ++slots;
        }
        cv.notify_one();
    }
};

RemoteBackend::RemoteBackend(BackendDescriptor descriptor, std::shared_ptr<Transport> transport,
                             RetryPolicy retry, int max_in_flight)
    : descriptor_(std::move(descriptor)),
      transport_(std::move(transport)),
      retry_(retry),
      gate_(std::make_shared<Gate>(max_in_flight > 0 ? max_in_flight : 1)) {
    descriptor_.validate();
    if (descriptor_.kind != BackendKind::RemoteHttp)
        throw usage_error("RemoteBackend requires a remote_http descriptor");
}

namespace {

std::vector<Header> request_headers() {
    std::vector<Header> hs;
    if (const char* key = std::getenv("OSST_API_KEY"); key && *key)
        hs.emplace_back("Authorization", std::string("Bearer ") + key);
    return hs;
}

bool retryable_status(int status) { return status == 429 || (status >= 500 && status < 600); }

}  // namespace

HttpResponse RemoteBackend::post_with_retry(const std::string& path, const json& body) const {
    const std::string payload = body.dump();
    const auto headers = request_headers();
    double backoff_ms = retry_.initial_backoff_ms;
    double retry_after_ms = -1.0;  // Retry-After override for the next delay
    std::string last_error;

    for (int attempt = 0; attempt < retry_.max_attempts; ++attempt) {
        if (attempt > 0) {
            const double delay = retry_after_ms >= 0.0 ? retry_after_ms : backoff_ms;
            std::this_thread::sleep_for(std::chrono::milliseconds(static_cast<long>(delay)));
            backoff_ms *= retry_.multiplier;
            retry_after_ms = -1.0;
        }
        gate_->acquire();
        TransportResult res = transport_->post(path, headers, payload);
        gate_->release();
        if (!res.ok) {
            last_error = "transport failure: " + res.error;
            continue;
        }
        if (retryable_status(res.response.status)) {
            last_error = "server returned status " + std::to_string(res.response.status);
            auto it = res.response.headers.find("retry-after");
            if (it != res.response.headers.end())
                retry_after_ms = std::stod(it->second) * 1000.0;
            continue;
        }
        if (res.response.status != 200)
            throw backend_error("server rejected request (" + std::to_string(res.response.status) +
                                "): " + res.response.body);
        return res.response;
    }
    throw backend_error("request to " + path + " failed after " +
                        std::to_string(retry_.max_attempts) + " attempts: " + last_error);
}

std::vector<TokenLogprob> RemoteBackend::echo_score(const EchoScoreRequest& req) const {
    req.validate();
    json body{{"model", descriptor_.model_id},
              {"prompt", req.full_prompt},
              {"max_tokens", 0},
              {"echo", true},
              {"logprobs", 1}};
    for (const auto& [k, v] : descriptor_.request_params)
        if (!body.contains(k)) body[k] = v;

    HttpResponse resp = post_with_retry("/completions", body);
    json parsed = json::parse(resp.body, nullptr, false);
    if (parsed.is_discarded()) throw backend_error("malformed JSON in completions response");

    const json* lp = nullptr;
    if (parsed.contains("choices") && !parsed["choices"].empty() &&
        parsed["choices"][0].contains("logprobs"))
        lp = &parsed["choices"][0]["logprobs"];
    if (!lp || !lp->contains("tokens") || !lp->contains("token_logprobs") ||
        !lp->contains("text_offset"))
        throw backend_error(
            "server response lacks tokens/token_logprobs/text_offset; "
            "echo scoring needs an offsets-capable completions server");

    const auto& tokens = (*lp)["tokens"];
    const auto& logprobs = (*lp)["token_logprobs"];
    const auto& offsets = (*lp)["text_offset"];
    if (tokens.size() != logprobs.size() || tokens.size() != offsets.size())
        throw backend_error("inconsistent logprob array lengths in response");

    std::vector<TokenLogprob> out;
    long prev_offset = -1;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        const long off = offsets[i].get<long>();
        if (off <= prev_offset) throw backend_error("non-increasing text offsets in response");
        prev_offset = off;
        const auto start = static_cast<std::size_t>(off);
        if (start < req.span_start || start >= req.span_end) continue;
        if (logprobs[i].is_null())
            throw backend_error("null logprob inside score span at offset " + std::to_string(off));
        TokenLogprob tok;
        tok.token_text = tokens[i].get<std::string>();
        tok.logprob = logprobs[i].get<double>();
        tok.byte_offset = start;
        if (!std::isfinite(tok.logprob))
            throw backend_error("non-finite logprob in response at offset " + std::to_string(off));
        out.push_back(std::move(tok));
    }
    if (out.empty()) throw backend_error("no tokens fell inside the score span");
    return out;
}

std::string RemoteBackend::generate(const std::string& instruction_prompt) const {
    json body{{"model", descriptor_.model_id},
              {"messages", json::array({json{{"role", "user"}, {"content", instruction_prompt}}})}};
    for (const auto& [k, v] : descriptor_.request_params)
        if (!body.contains(k)) body[k] = v;

    HttpResponse resp = post_with_retry("/chat/completions", body);
    json parsed = json::parse(resp.body, nullptr, false);
    if (parsed.is_discarded()) throw backend_error("malformed JSON in chat response");
    try {
        std::string content = parsed.at("choices").at(0).at("message").at("content").get<std::string>();
        if (content.empty()) throw backend_error("empty generation from server");
        return content;
    } catch (const json::exception&) {
        throw backend_error("chat response lacks choices[0].message.content");
    }
}

}  // namespace osst
