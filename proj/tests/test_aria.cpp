#include <map>
#include <string>

#include <doctest.h>

#include "rng.hpp"
#include "util.hpp"

using namespace forge;

namespace {

struct AriaFixture {
    Simulation sim{21};
    uint32_t e;

    AriaFixture() : e(testutil::launch(sim, "aria")) { testutil::connect(sim, 1, e); }

    Reply put(const std::string& k, const std::string& v) {
        return testutil::send_and_wait(sim, 1, AriaPut{k, to_bytes(v)});
    }
    Reply get(const std::string& k, bool full = false) {
        return testutil::send_and_wait(sim, 1, AriaGet{k, full});
    }
};

}  // namespace

TEST_CASE("aria: put/get round trips") {
    AriaFixture f;
    CHECK(f.put("k", "vA").err == Err::None);
    CHECK(f.put("k", "vB").err == Err::None);
    auto r = f.get("k");
    CHECK(r.err == Err::None);
    CHECK(to_string(r.payload) == "vB");

    SUBCASE("fresh key gets a counter") {
        auto ack = f.put("new", "x");
        CHECK(ack.err == Err::None);
        CHECK(ack.num > 0);
    }
    SUBCASE("empty value round trips") {
        CHECK(f.put("empty", "").err == Err::None);
        auto e = f.get("empty");
        CHECK(e.err == Err::None);
        CHECK(e.payload.empty());
    }
    SUBCASE("never-written key -> NotFound") { CHECK(f.get("nope").err == Err::NotFound); }
}

TEST_CASE("aria: cache path and full-verification path agree") {
    AriaFixture f;
    CounterRng rng(77);
    std::map<std::string, std::string> model;
    for (int i = 0; i < 300; ++i) {
        std::string k = "k" + std::to_string(rng.below(90));
        if (rng.below(3) != 0 || model.empty()) {
            std::string v = "v" + std::to_string(rng.next_u64() & 0xffff);
            REQUIRE(f.put(k, v).err == Err::None);
            model[k] = v;
        } else {
            auto cached = f.get(k, false);
            auto full = f.get(k, true);
            CHECK(cached.err == full.err);
            CHECK(cached.payload == full.payload);
            auto it = model.find(k);
            if (it == model.end()) {
                CHECK(full.err == Err::NotFound);
            } else {
                CHECK(full.err == Err::None);
                CHECK(to_string(full.payload) == it->second);
            }
        }
    }
}

TEST_CASE("aria: counter cache eviction keeps answers exact past capacity") {
    AriaFixture f;
    for (int i = 0; i < 200; ++i)
        REQUIRE(f.put("key-" + std::to_string(i), "val-" + std::to_string(i)).err == Err::None);
    for (int i = 0; i < 200; ++i) {
        auto r = f.get("key-" + std::to_string(i));
        REQUIRE(r.err == Err::None);
        CHECK(to_string(r.payload) == "val-" + std::to_string(i));
    }
}

TEST_CASE("aria: randomized host mutations never go undetected") {
    AriaFixture f;
    const int keys = 12;
    for (int i = 0; i < keys; ++i)
        REQUIRE(f.put("k" + std::to_string(i), "v" + std::to_string(i)).err == Err::None);

    CounterRng rng(31337);
    int detected = 0;
    const int trials = 1000;
    for (int t = 0; t < trials; ++t) {
        auto& table = f.sim.host().aria_view(f.e);
        std::string k = "k" + std::to_string(rng.below(keys));
        auto saved = table;
        auto& entry = table.at(k);
        switch (rng.below(4)) {
            case 0:
                entry.entry_counter += 1 + rng.below(5);
                break;
            case 1:
                entry.ciphertext[rng.below(entry.ciphertext.size())] ^=
                    static_cast<uint8_t>(1 + rng.below(255));
                break;
            case 2:
                entry.mac[rng.below(entry.mac.size())] ^= static_cast<uint8_t>(1 + rng.below(255));
                break;
            default:
                table.erase(k);
                break;
        }
        auto r = testutil::send_and_wait(f.sim, 1, AriaGet{k, rng.below(2) == 0});
        if (r.err == Err::IntegrityError) ++detected;
        table = saved;
    }
    CHECK(detected == trials);
}

TEST_CASE("aria: replaying a stale entry is detected") {
    AriaFixture f;
    REQUIRE(f.put("k", "v0").err == Err::None);
    auto stale = f.sim.host().aria_view(f.e).at("k");
    REQUIRE(f.put("k", "v1").err == Err::None);
    f.sim.host().aria_view(f.e)["k"] = stale;

    CHECK(f.get("k", true).err == Err::IntegrityError);
    CHECK(f.get("k", false).err == Err::IntegrityError);
}

TEST_CASE("aria: single-instance runs match a plain map oracle") {
    AriaFixture f;
    CounterRng rng(4242);
    std::map<std::string, std::string> oracle;
    for (int i = 0; i < 2000; ++i) {
        std::string k = "k" + std::to_string(rng.below(40));
        if (rng.below(2) == 0) {
            std::string v = std::to_string(i);
            REQUIRE(f.put(k, v).err == Err::None);
            oracle[k] = v;
        } else {
            auto r = f.get(k, rng.below(8) == 0);
            auto it = oracle.find(k);
            if (it == oracle.end()) {
                CHECK(r.err == Err::NotFound);
            } else {
                REQUIRE(r.err == Err::None);
                CHECK(to_string(r.payload) == it->second);
            }
        }
    }
}
