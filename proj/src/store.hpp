#pragma once

#include <filesystem>
#include <initializer_list>
#include <optional>
#include <string>
#include <string_view>

#include "json.hpp"

namespace osst {

// Content-addressed file cache: one JSON file per entry under
// <dir>/<first-2-hex>/<key>.json. Writes go through a temp file and an
// atomic rename, so concurrent readers and writers never see torn values.
class Store {
public:
    explicit Store(std::filesystem::path dir);

    std::optional<nlohmann::json> get(const std::string& key) const;
    void put(const std::string& key, const nlohmann::json& value) const;

    const std::filesystem::path& dir() const { return dir_; }

    // SHA-256 over the canonical joined parts; the separator keeps
    // ("ab","c") distinct from ("a","bc").
    static std::string make_key(std::initializer_list<std::string_view> parts);

private:
    std::filesystem::path entry_path(const std::string& key) const;
    std::filesystem::path dir_;
};

}  // namespace osst
