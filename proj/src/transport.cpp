#include "transport.hpp"

#include <cctype>
#include <fstream>

#include "httplib.h"

#include "errors.hpp"

namespace osst {

struct HttpTransport::Impl {
    std::string base_path;
    std::unique_ptr<httplib::Client> client;
};

HttpTransport::HttpTransport(const std::string& endpoint) : impl_(std::make_unique<Impl>()) {
    // split scheme://authority from an optional base path
    auto scheme_end = endpoint.find("://");
    if (scheme_end == std::string::npos) throw usage_error("endpoint must include a scheme: " + endpoint);
    auto path_start = endpoint.find('/', scheme_end + 3);
    std::string origin = path_start == std::string::npos ? endpoint : endpoint.substr(0, path_start);
    impl_->base_path = path_start == std::string::npos ? "" : endpoint.substr(path_start);
    if (!impl_->base_path.empty() && impl_->base_path.back() == '/') impl_->base_path.pop_back();
    impl_->client = std::make_unique<httplib::Client>(origin);
    impl_->client->set_connection_timeout(10);
    impl_->client->set_read_timeout(300);
}

HttpTransport::~HttpTransport() = default;

TransportResult HttpTransport::post(const std::string& path, const std::vector<Header>& headers,
                                    const std::string& body) {
    httplib::Headers hs;
    for (const auto& [k, v] : headers) hs.emplace(k, v);
    auto res = impl_->client->Post(impl_->base_path + path, hs, body, "application/json");
    TransportResult out;
    if (!res) {
        out.ok = false;
        out.error = httplib::to_string(res.error());
        return out;
    }
    out.ok = true;
    out.response.status = res->status;
    for (const auto& [k, v] : res->headers) {
        std::string key = k;
        for (char& c : key) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        out.response.headers[key] = v;
    }
    out.response.body = res->body;
    return out;
}

FixtureTransport::FixtureTransport(const nlohmann::json& exchanges) {
    for (const auto& e : exchanges) {
        Exchange ex;
        ex.path = e.at("request").at("path").get<std::string>();
        ex.request_body = e.at("request").at("body");
        const auto& r = e.at("response");
        ex.response.status = r.at("status").get<int>();
        if (r.contains("headers"))
            for (const auto& [k, v] : r.at("headers").items()) {
                std::string key = k;
                for (char& c : key) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
                ex.response.headers[key] = v.get<std::string>();
            }
        const auto& b = r.at("body");
        ex.response.body = b.is_string() ? b.get<std::string>() : b.dump();
        exchanges_.push_back(std::move(ex));
    }
}

FixtureTransport FixtureTransport::from_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot open fixture file: " + path);
    nlohmann::json j;
    in >> j;
    return FixtureTransport(j);
}

TransportResult FixtureTransport::post(const std::string& path,
                                       const std::vector<Header>& headers,
                                       const std::string& body) {
    std::lock_guard<std::mutex> lock(mu_);
    seen_.push_back(headers);
    nlohmann::json parsed = nlohmann::json::parse(body, nullptr, false);
    for (auto& ex : exchanges_) {
        if (ex.used || ex.path != path || ex.request_body != parsed) continue;
        ex.used = true;
        TransportResult out;
        out.ok = true;
        out.response = ex.response;
        return out;
    }
    TransportResult out;
    out.ok = false;
    out.error = "no recorded exchange matches request to " + path;
    return out;
}

std::vector<std::vector<Header>> FixtureTransport::seen_headers() const {
    std::lock_guard<std::mutex> lock(mu_);
    return seen_;
}

std::size_t FixtureTransport::consumed() const {
    std::lock_guard<std::mutex> lock(mu_);
    std::size_t n = 0;
    for (const auto& e : exchanges_)
        if (e.used) ++n;
    return n;
}

}  // namespace osst
