#include "doctest.h"

#include <set>
#include <thread>

#include "store.hpp"
#include "support/support.hpp"

using namespace osst;
using osst::testsupport::TempDir;

TEST_CASE("put then get round trips") {
    TempDir tmp;
    Store store(tmp.path);
    const std::string key = Store::make_key({"kind", "payload"});
    nlohmann::json value = {{"a", 1}, {"b", "text"}};
    store.put(key, value);
    auto got = store.get(key);
    REQUIRE(got.has_value());
    CHECK(*got == value);
}

TEST_CASE("missing key is absent") {
    TempDir tmp;
    Store store(tmp.path);
    CHECK_FALSE(store.get(Store::make_key({"nothing", "here"})).has_value());
}

TEST_CASE("entries land in two-hex-prefix shards") {
    TempDir tmp;
    Store store(tmp.path);
    const std::string key = Store::make_key({"shard", "check"});
    store.put(key, nlohmann::json{{"v", 1}});
    CHECK(std::filesystem::exists(tmp.path / key.substr(0, 2) / (key + ".json")));
}

TEST_CASE("make_key separates part boundaries") {
    std::set<std::string> keys;
    keys.insert(Store::make_key({"ab", "c"}));
    keys.insert(Store::make_key({"a", "bc"}));
    keys.insert(Store::make_key({"abc"}));
    keys.insert(Store::make_key({"abc", ""}));
    CHECK(keys.size() == 4);
}

TEST_CASE("concurrent puts of the same key leave one readable value") {
    TempDir tmp;
    Store store(tmp.path);
    const std::string key = Store::make_key({"race"});
    std::vector<std::thread> threads;
    for (int i = 0; i < 8; ++i)
        threads.emplace_back([&store, &key] {
            for (int j = 0; j < 50; ++j) store.put(key, nlohmann::json{{"winner", "same"}});
        });
    std::thread reader([&store, &key] {
        for (int j = 0; j < 200; ++j) {
            auto got = store.get(key);
            if (got) CHECK((*got)["winner"] == "same");  // never a torn value
        }
    });
    for (auto& t : threads) t.join();
    reader.join();
    auto got = store.get(key);
    REQUIRE(got.has_value());
    CHECK((*got)["winner"] == "same");
}
