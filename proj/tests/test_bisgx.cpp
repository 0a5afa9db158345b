#include <set>
#include <vector>

#include <doctest.h>

#include "util.hpp"

using namespace forge;

namespace {

Bytes ints(const std::vector<int64_t>& xs) {
    Bytes out;
    for (int64_t x : xs) append_u64_le(out, static_cast<uint64_t>(x));
    return out;
}

int64_t as_i64(uint64_t num) { return static_cast<int64_t>(num); }

}  // namespace

TEST_CASE("bisgx: inc-then-store assigns fresh indices sequentially") {
    for (int n = 1; n <= 10; ++n) {
        Simulation sim(41);
        auto e = testutil::launch(sim, "bisgx");
        testutil::connect(sim, 1, e);
        std::set<uint64_t> indices;
        for (int i = 0; i < n; ++i) {
            auto r = testutil::send_and_wait(sim, 1, BisgxStore{ints({i})});
            REQUIRE(r.err == Err::None);
            CHECK(r.num == static_cast<uint64_t>(i + 1));
            indices.insert(r.num);
        }
        CHECK(indices.size() == static_cast<size_t>(n));
        CHECK(sim.host().bisgx_db.size() == static_cast<size_t>(n));
    }
}

TEST_CASE("bisgx: queries evaluate count, sum, mean over the sealed list") {
    Simulation sim(42);
    auto e = testutil::launch(sim, "bisgx");
    testutil::connect(sim, 1, e);
    auto idx = testutil::send_and_wait(sim, 1, BisgxStore{ints({4, -10, 9})}).num;

    CHECK(as_i64(testutil::send_and_wait(sim, 1, BisgxQuery{idx, "count"}).num) == 3);
    CHECK(as_i64(testutil::send_and_wait(sim, 1, BisgxQuery{idx, "sum"}).num) == 3);
    CHECK(as_i64(testutil::send_and_wait(sim, 1, BisgxQuery{idx, "mean"}).num) == 1);

    SUBCASE("empty list evaluates to zero everywhere") {
        auto eidx = testutil::send_and_wait(sim, 1, BisgxStore{Bytes{}}).num;
        for (const char* fn : {"count", "sum", "mean"})
            CHECK(testutil::send_and_wait(sim, 1, BisgxQuery{eidx, fn}).num == 0);
    }
    SUBCASE("mean truncates toward zero") {
        auto midx = testutil::send_and_wait(sim, 1, BisgxStore{ints({-3, -4})}).num;
        CHECK(as_i64(testutil::send_and_wait(sim, 1, BisgxQuery{midx, "mean"}).num) == -3);
    }
    SUBCASE("unknown index -> NotFound") {
        CHECK(testutil::send_and_wait(sim, 1, BisgxQuery{77, "count"}).err == Err::NotFound);
    }
    SUBCASE("unknown function -> ConfigError") {
        CHECK(testutil::send_and_wait(sim, 1, BisgxQuery{idx, "median"}).err == Err::ConfigError);
    }
}

TEST_CASE("bisgx: swapped or damaged records are rejected") {
    Simulation sim(43);
    auto e = testutil::launch(sim, "bisgx");
    testutil::connect(sim, 1, e);
    REQUIRE(testutil::send_and_wait(sim, 1, BisgxStore{ints({1})}).err == Err::None);
    REQUIRE(testutil::send_and_wait(sim, 1, BisgxStore{ints({2, 2})}).err == Err::None);

    SUBCASE("record 1 answered with record 2's blob -> IndexMismatch") {
        sim.host().bisgx_db[0].second = sim.host().bisgx_db[1].second;
        CHECK(testutil::send_and_wait(sim, 1, BisgxQuery{1, "count"}).err == Err::IndexMismatch);
    }
    SUBCASE("tampered blob -> UnsealError") {
        sim.host().bisgx_db[0].second.ciphertext[0] ^= 1;
        CHECK(testutil::send_and_wait(sim, 1, BisgxQuery{1, "count"}).err == Err::UnsealError);
    }
}

TEST_CASE("bisgx: paused clone interleaving lands both stores on one index") {
    Simulation sim(44);
    auto e0 = testutil::launch(sim, "bisgx");
    auto e1 = testutil::launch(sim, "bisgx");
    testutil::connect(sim, 1, e0);
    testutil::connect(sim, 2, e1);

    REQUIRE(sim.arm_pause_after_mc_increment(e0).ok());
    REQUIRE(sim.client_send(1, BisgxStore{ints({11, 11})}).ok());
    REQUIRE(sim.client_send(2, BisgxStore{ints({22})}).ok());
    sim.run_ticks(1);
    CHECK(sim.instance(e0).paused);
    sim.run_until_idle();
    REQUIRE(sim.resume(e0).ok());
    sim.run_until_idle();

    auto r1 = testutil::last_reply(sim, 1);
    auto r2 = testutil::last_reply(sim, 2);
    REQUIRE(r1.err == Err::None);
    REQUIRE(r2.err == Err::None);
    CHECK(r1.num == 2);
    CHECK(r2.num == 2);

    const auto& db = sim.host().bisgx_db;
    REQUIRE(db.size() == 2);
    CHECK(db[0].first == 2);
    CHECK(db[1].first == 2);
    CHECK(!(db[0].second.digest() == db[1].second.digest()));

    SUBCASE("either blob answers a query for that index") {
        sim.host().bisgx_serve_latest = false;
        auto a = testutil::send_and_wait(sim, 2, BisgxQuery{2, "count"});
        sim.host().bisgx_serve_latest = true;
        auto b = testutil::send_and_wait(sim, 2, BisgxQuery{2, "count"});
        CHECK(a.err == Err::None);
        CHECK(b.err == Err::None);
        std::set<uint64_t> counts{a.num, b.num};
        CHECK(counts == std::set<uint64_t>{1, 2});
    }
}
