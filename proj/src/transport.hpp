#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace osst {

struct HttpResponse {
    int status = 0;
    std::map<std::string, std::string> headers;  // lowercase field names
    std::string body;
};

struct TransportResult {
    bool ok = false;  // false = transport-level failure (retryable)
    std::string error;
    HttpResponse response;
};

using Header = std::pair<std::string, std::string>;

class Transport {
public:
    virtual ~Transport() = default;
    virtual TransportResult post(const std::string& path, const std::vector<Header>& headers,
                                 const std::string& body) = 0;
};

// Live HTTP transport over cpp-httplib. `endpoint` is scheme://host[:port][/base-path].
class HttpTransport : public Transport {
public:
    explicit HttpTransport(const std::string& endpoint);
    ~HttpTransport() override;
    TransportResult post(const std::string& path, const std::vector<Header>& headers,
                         const std::string& body) override;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// Replays recorded request/response exchanges; no network. An exchange is
// consumed when its path matches and its recorded request body equals the
// outgoing body as JSON. Duplicate entries model retry sequences in order.
class FixtureTransport : public Transport {
public:
    explicit FixtureTransport(const nlohmann::json& exchanges);
    static FixtureTransport from_file(const std::string& path);

    TransportResult post(const std::string& path, const std::vector<Header>& headers,
                         const std::string& body) override;

    // Headers observed on outgoing requests, for conformance checks.
    std::vector<std::vector<Header>> seen_headers() const;
    std::size_t consumed() const;

private:
    struct Exchange {
        std::string path;
        nlohmann::json request_body;
        HttpResponse response;
        bool used = false;
    };
    mutable std::mutex mu_;
    std::vector<Exchange> exchanges_;
    std::vector<std::vector<Header>> seen_;
};

}  // namespace osst
