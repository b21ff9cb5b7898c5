#include "store.hpp"

#include <fstream>
#include <random>

#include "errors.hpp"
#include "text.hpp"

namespace osst {

Store::Store(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::filesystem::create_directories(dir_);
}

std::filesystem::path Store::entry_path(const std::string& key) const {
    if (key.size() < 3) throw usage_error("cache key too short");
    return dir_ / key.substr(0, 2) / (key + ".json");
}

std::optional<nlohmann::json> Store::get(const std::string& key) const {
    std::ifstream in(entry_path(key));
    if (!in) return std::nullopt;
    nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded()) return std::nullopt;  // torn or corrupt entry, treat as miss
    return j;
}

void Store::put(const std::string& key, const nlohmann::json& value) const {
    const auto path = entry_path(key);
    std::filesystem::create_directories(path.parent_path());

    static thread_local std::mt19937_64 rng{std::random_device{}()};
    const auto tmp = path.parent_path() /
                     (path.filename().string() + ".tmp" + std::to_string(rng()));
    {
        std::ofstream out(tmp);
        if (!out) throw data_error("cannot write cache entry: " + tmp.string());
        out << value.dump();
    }
    std::filesystem::rename(tmp, path);
}

std::string Store::make_key(std::initializer_list<std::string_view> parts) {
    std::string joined;
    for (const auto& p : parts) {
        joined += std::to_string(p.size());
        joined.push_back(':');
        joined.append(p);
    }
    return text::sha256_hex(joined);
}

}  // namespace osst
