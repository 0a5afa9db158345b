// Acceptance gate: ten criteria, one PASS/FAIL line each, exit 1 on any
// failure. Tolerances and time budgets are pinned inline.
#include <chrono>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include "attacks/verdict.hpp"
#include "detector/channel.hpp"
#include "detector/classifier.hpp"
#include "oracle_cache.hpp"
#include "platform.hpp"
#include "rng.hpp"
#include "runner.hpp"
#include "sim.hpp"

using namespace forge;

#define NEED(cond, ...)                                  \
    do {                                                 \
        if (!(cond)) {                                   \
            char buf_[256];                              \
            std::snprintf(buf_, sizeof buf_, __VA_ARGS__); \
            why = buf_;                                  \
            return false;                                \
        }                                                \
    } while (0)

namespace {

constexpr int kSeeds = 100;           // runs per scripted reproduction
constexpr int kCorpusPerLabel = 50;   // solo + clone runs per noise rate
constexpr double kF1AtQuiet = 1.0;    // exact, r = 0
constexpr double kF1AtNoisy = 0.95;   // lower bound, r = 0.2

attacks::ScenarioConfig cfg_of(attacks::Category cat, const char* app, uint32_t clones,
                               uint32_t clients, uint64_t seed) {
    attacks::ScenarioConfig cfg;
    cfg.seed = seed;
    cfg.category = cat;
    cfg.app = app;
    cfg.clones = clones;
    cfg.clients = clients;
    return cfg;
}

bool run_cfg(const attacks::ScenarioConfig& cfg, attacks::Verdict& out, std::string& why) {
    auto r = attacks::run_scenario(cfg);
    if (!r.ok()) {
        why = std::string("scenario error: ") + err_name(r.error());
        return false;
    }
    out = r.take();
    return true;
}

bool c1_sealing_matrix(std::string& why) {
    struct Case {
        bool same_platform, same_mrenclave, same_mrsigner;
        SealPolicy policy;
        Err expect;
    };
    const Case matrix[] = {
        {true, true, true, SealPolicy::MRENCLAVE, Err::None},
        {true, true, false, SealPolicy::MRENCLAVE, Err::None},
        {true, false, true, SealPolicy::MRENCLAVE, Err::IdentityMismatch},
        {true, false, false, SealPolicy::MRENCLAVE, Err::IdentityMismatch},
        {false, true, true, SealPolicy::MRENCLAVE, Err::CrossPlatform},
        {false, true, false, SealPolicy::MRENCLAVE, Err::CrossPlatform},
        {false, false, true, SealPolicy::MRENCLAVE, Err::CrossPlatform},
        {false, false, false, SealPolicy::MRENCLAVE, Err::CrossPlatform},
        {true, true, true, SealPolicy::MRSIGNER, Err::None},
        {true, true, false, SealPolicy::MRSIGNER, Err::IdentityMismatch},
        {true, false, true, SealPolicy::MRSIGNER, Err::None},
        {true, false, false, SealPolicy::MRSIGNER, Err::IdentityMismatch},
        {false, true, true, SealPolicy::MRSIGNER, Err::CrossPlatform},
        {false, true, false, SealPolicy::MRSIGNER, Err::CrossPlatform},
        {false, false, true, SealPolicy::MRSIGNER, Err::CrossPlatform},
        {false, false, false, SealPolicy::MRSIGNER, Err::CrossPlatform},
    };

    auto sealer = identity_of(EnclaveBinary::make("app", "", "key-1"));
    Bytes secret = to_bytes("acceptance-secret");
    int idx = 0;
    for (const auto& c : matrix) {
        Platform p1(PlatformId::from_name("P1"));
        Platform p2(PlatformId::from_name("P2"));
        auto blob = p1.seal(sealer, secret, c.policy);
        auto opener = identity_of(EnclaveBinary::make(c.same_mrenclave ? "app" : "other", "",
                                                      c.same_mrsigner ? "key-1" : "key-2"));
        auto r = (c.same_platform ? p1 : p2).unseal(opener, blob);
        Err got = r.ok() ? Err::None : r.error();
        NEED(got == c.expect, "case %d: expected %s, got %s", idx, err_name(c.expect),
             err_name(got));
        if (r.ok()) NEED(r.value() == secret, "case %d: plaintext mismatch", idx);
        ++idx;
    }
    return true;
}

bool c2_fim(std::string& why) {
    for (uint64_t seed = 0; seed < kSeeds; ++seed) {
        attacks::Verdict v;
        if (!run_cfg(cfg_of(attacks::Category::FIm, "aria", 2, 2, seed), v, why)) return false;
        NEED(v.violated, "attack seed %llu: not violated", (unsigned long long)seed);
        NEED(!v.evidence.stale_reads.empty() && v.evidence.stale_reads[0].got == "vA" &&
                 v.evidence.stale_reads[0].latest == "vB",
             "attack seed %llu: missing vA-after-vB evidence", (unsigned long long)seed);

        if (!run_cfg(cfg_of(attacks::Category::FIm, "aria", 1, 2, seed), v, why)) return false;
        NEED(!v.violated && v.evidence.stale_reads.empty(),
             "benign seed %llu: flagged a violation", (unsigned long long)seed);
    }
    return true;
}

bool c3_bisgx(std::string& why) {
    for (uint64_t seed = 0; seed < kSeeds; ++seed) {
        auto cfg = cfg_of(attacks::Category::ForKVS, "bisgx", 2, 2, seed);
        attacks::Verdict v;
        if (!run_cfg(cfg, v, why)) return false;
        NEED(v.violated && v.evidence.duplicate_indices.size() == 1,
             "paused seed %llu: no duplicate index", (unsigned long long)seed);
        const auto& dup = v.evidence.duplicate_indices[0];
        NEED(dup.index == cfg.mc_base + 2, "paused seed %llu: index %llu, want MC+2",
             (unsigned long long)seed, (unsigned long long)dup.index);
        NEED(dup.blobs.size() == 2 && dup.blobs[0] != dup.blobs[1],
             "paused seed %llu: want two distinct blobs", (unsigned long long)seed);

        cfg.inject_pause = false;
        if (!run_cfg(cfg, v, why)) return false;
        NEED(!v.violated && v.evidence.duplicate_indices.empty(),
             "sequential seed %llu: indices collided", (unsigned long long)seed);
    }
    return true;
}

bool c4_pkvs(std::string& why) {
    for (uint64_t seed = 0; seed < kSeeds; ++seed) {
        attacks::Verdict v;
        if (!run_cfg(cfg_of(attacks::Category::ForKVS, "pkvs", 2, 2, seed), v, why)) return false;
        NEED(v.violated && !v.evidence.stale_reads.empty() &&
                 v.evidence.stale_reads[0].got == "v0" && v.evidence.stale_reads[0].latest == "v1",
             "attack seed %llu: missing v0-after-v1 evidence", (unsigned long long)seed);

        if (!run_cfg(cfg_of(attacks::Category::ForKVS, "pkvs", 1, 2, seed), v, why)) return false;
        NEED(!v.violated, "benign seed %llu: flagged a violation", (unsigned long long)seed);
        const std::string* got = nullptr;
        for (const auto& e : v.events)
            if (e.kind == "pkvs_get" && !got) got = e.field("value");
        NEED(got && *got == "v1", "benign seed %llu: restart read %s, want v1",
             (unsigned long long)seed, got ? got->c_str() : "(none)");
    }
    return true;
}

bool c5_bug(std::string& why) {
    for (uint32_t n : {2u, 3u, 5u}) {
        attacks::Verdict v;
        if (!run_cfg(cfg_of(attacks::Category::BUG, "proxy", n, n, 7), v, why)) return false;
        NEED(v.violated, "n=%u clones: not violated", n);
        NEED(v.anonymity_sets.size() == n, "n=%u clones: %zu sets", n, v.anonymity_sets.size());
        for (const auto& [c, s] : v.anonymity_sets)
            NEED(s.size() == 1 && s[0] == c, "n=%u clones: client %u set size %zu", n, c,
                 s.size());
        NEED(v.evidence.recovered_mapping.size() == n, "n=%u clones: partial mapping", n);
        for (const auto& [c, seg] : v.evidence.recovered_mapping)
            NEED(seg == "seg-" + std::to_string(c), "n=%u clones: client %u mapped to %s", n, c,
                 seg.c_str());

        if (!run_cfg(cfg_of(attacks::Category::BUG, "proxy", 1, n, 7), v, why)) return false;
        NEED(!v.violated, "n=%u single: violated", n);
        for (const auto& [c, s] : v.anonymity_sets)
            NEED(s.size() == n, "n=%u single: client %u set size %zu", n, c, s.size());
    }
    return true;
}

bool c6_mitigations(std::string& why) {
    const std::pair<attacks::Category, const char*> scripts[] = {
        {attacks::Category::FIm, "aria"},
        {attacks::Category::ForKVS, "bisgx"},
        {attacks::Category::ForKVS, "pkvs"},
    };
    for (const auto& [cat, app] : scripts) {
        auto cfg = cfg_of(cat, app, 2, 2, 7);
        cfg.mitigation = attacks::Mitigation::TrustedRegistry;
        attacks::Verdict v;
        if (!run_cfg(cfg, v, why)) return false;
        NEED(!v.violated && v.rejected_launches == 1, "registry: %s still violated", app);
    }

    for (uint64_t seed = 0; seed < kSeeds; ++seed) {
        attacks::Verdict v;
        if (!run_cfg(cfg_of(attacks::Category::Detector, "idle", 2, 1, 5000 + seed), v, why))
            return false;
        NEED(v.detected, "clone seed %llu: not detected", (unsigned long long)seed);
        for (const auto& t : v.traces)
            NEED(!t.decisions.empty() &&
                     t.decisions[0] == detect::WindowDecision::CloneDetected,
                 "clone seed %llu: first window of instance %u not flagged",
                 (unsigned long long)seed, t.instance);

        if (!run_cfg(cfg_of(attacks::Category::Detector, "idle", 1, 1, 5000 + seed), v, why))
            return false;
        NEED(!v.detected, "solo seed %llu: false positive", (unsigned long long)seed);
        for (const auto& t : v.traces)
            for (auto d : t.decisions)
                NEED(d == detect::WindowDecision::Alone, "solo seed %llu: flagged window",
                     (unsigned long long)seed);
    }
    return true;
}

bool c7_calibration(std::string& why) {
    const double rates[] = {0.0, 0.05, 0.2};
    for (double rate : rates) {
        std::vector<detect::CorpusRun> corpus;
        for (int i = 0; i < kCorpusPerLabel; ++i) {
            for (bool clone : {false, true}) {
                auto cfg = cfg_of(attacks::Category::Detector, "idle", clone ? 2 : 1, 1,
                                  9000 + 2 * i + (clone ? 1 : 0));
                cfg.noise = rate;
                attacks::Verdict v;
                if (!run_cfg(cfg, v, why)) return false;
                NEED(!v.traces.empty(), "rate %.2f: no trace", rate);
                corpus.push_back(detect::reduce_run(clone, v.traces[0].samples, v.window));
            }
        }
        uint64_t full = 10ull * 16 * 16;  // window * channel sets * ways
        auto best = detect::best_row(detect::sweep_thresholds(corpus, full));
        if (rate == 0.0)
            NEED(best.metrics.f1 == kF1AtQuiet, "r=0: best F1 %.4f, want exactly %.2f",
                 best.metrics.f1, kF1AtQuiet);
        if (rate == 0.2)
            NEED(best.metrics.f1 >= kF1AtNoisy, "r=0.2: best F1 %.4f < %.2f", best.metrics.f1,
                 kF1AtNoisy);
    }
    return true;
}

bool c8_oracle(std::string& why) {
    detect::CacheGeometry geom{256, 4};
    detect::CacheModel cache(geom);
    std::vector<detect::CacheOp> ops;
    cache.set_recorder(&ops);

    auto channel_for = [&](uint64_t owner) {
        auto ch = detect::derive_channel(identity_of(EnclaveBinary::make("app")), geom, 8);
        detect::build_eviction_sets(ch.value(), geom);
        return detect::Monitor(ch.take(), owner);
    };
    auto m0 = channel_for(0);
    auto m1 = channel_for(1);
    CounterRng rng(31337);

    m0.prime(cache);
    for (uint64_t step = 1; step <= 1000; ++step) {
        if (rng.below(4) == 0) m1.probe(cache, step);
        m0.probe(cache, step);
        if (rng.below(3) != 0) detect::noise_tick(cache, 0.03 + 0.2 * rng.unit(), rng);
        if (rng.below(16) == 0) m1.prime(cache);
    }

    auto expected = oracle::replay(ops, geom);
    NEED(m0.trace().size() == 1000, "monitor took %zu samples", m0.trace().size());
    for (const auto* m : {&m0, &m1}) {
        const auto& tr = m->trace();
        for (size_t i = 0; i < tr.size(); ++i) {
            auto it = expected.find({m->owner(), i});
            NEED(it != expected.end(), "owner %llu sample %zu missing from oracle",
                 (unsigned long long)m->owner(), i);
            NEED(tr[i].hits == it->second.hits && tr[i].misses == it->second.misses,
                 "owner %llu sample %zu: %u/%u vs oracle %u/%u",
                 (unsigned long long)m->owner(), i, tr[i].hits, tr[i].misses, it->second.hits,
                 it->second.misses);
        }
    }
    return true;
}

bool c9_determinism(std::string& why) {
    for (const char* scenario :
         {"fim-aria", "forkvs-bisgx", "bug-proxy", "detector-bench"}) {
        runner::RunOptions opts;
        opts.scenario = scenario;
        opts.variant = "attack";
        opts.seed = 33;
        opts.noise = 0.1;
        auto r1 = runner::execute(opts);
        auto r2 = runner::execute(opts);
        NEED(r1.ok() && r2.ok(), "%s: run failed", scenario);
        NEED(r1.value().events == r2.value().events, "%s: event logs differ", scenario);
        NEED(r1.value().report.dump() == r2.value().report.dump(), "%s: reports differ",
             scenario);
        NEED(r1.value().traces == r2.value().traces, "%s: traces differ", scenario);
    }
    return true;
}

bool kvs_matches_map(const char* program, int op_count, std::string& why) {
    Simulation sim(4242);
    auto launched = sim.launch("host-A", EnclaveBinary::make(program));
    NEED(launched.ok(), "%s: launch failed", program);
    uint32_t e = launched.value();
    auto session =
        sim.establish_session(1, e, identity_of(sim.instance(e).binary).mrenclave);
    NEED(session.ok() && sim.route(1, e).ok(), "%s: session failed", program);

    bool aria = std::string(program) == "aria";
    CounterRng rng(aria ? 0xa51a : 0x9b0b);
    std::map<std::string, std::string> model;
    for (int i = 0; i < op_count; ++i) {
        std::string k = "k" + std::to_string(rng.below(64));
        if (rng.below(2) == 0) {
            std::string val = std::to_string(i);
            Request req = aria ? Request{AriaPut{k, to_bytes(val)}}
                               : Request{PkvsPut{k, to_bytes(val)}};
            sim.client_send(1, std::move(req));
            sim.run_until_idle();
            NEED(sim.replies(1).back().err == Err::None, "%s op %d: put failed", program, i);
            model[k] = val;
        } else {
            Request req = aria ? Request{AriaGet{k, rng.below(8) == 0}} : Request{PkvsGet{k}};
            sim.client_send(1, std::move(req));
            sim.run_until_idle();
            const auto& r = sim.replies(1).back();
            auto it = model.find(k);
            if (it == model.end()) {
                NEED(r.err == Err::NotFound, "%s op %d: ghost key %s", program, i, k.c_str());
            } else {
                NEED(r.err == Err::None && to_string(r.payload) == it->second,
                     "%s op %d: divergence on %s", program, i, k.c_str());
            }
        }
    }
    return true;
}

bool c10_kvs(std::string& why) {
    return kvs_matches_map("aria", 10000, why) && kvs_matches_map("pkvs", 10000, why);
}

}  // namespace

int main() {
    struct Criterion {
        const char* label;
        double limit_s;
        bool (*fn)(std::string&);
    };
    const Criterion criteria[] = {
        {"sealing matrix: 16/16 platform x identity x policy cases exact", 1, c1_sealing_matrix},
        {"in-memory KVS fork: vA-after-vB evidence 100/100, benign clean 100/100", 5, c2_fim},
        {"paused-clone store: duplicate index MC+2 100/100, sequential distinct 100/100", 5,
         c3_bisgx},
        {"persistent KVS fork: stale v0-after-v1 100/100, benign restart reads v1", 5, c4_pkvs},
        {"proxy deanonymization: singleton sets + full mapping for n in {2,3,5}", 5, c5_bug},
        {"mitigations: registry blocks all three attacks; detector 100/100 vs 0/100", 10,
         c6_mitigations},
        {"calibration: 50+50 corpus per rate, best F1 = 1.0 at r=0, >= 0.95 at r=0.2", 60,
         c7_calibration},
        {"oracle exactness: 1000 randomized ticks bit-exact on independent LRU", 10, c8_oracle},
        {"determinism: same-seed reruns byte-identical, one scenario per category", 5,
         c9_determinism},
        {"single-instance KVS vs plain map: 10000 ops each, zero divergences", 10, c10_kvs},
    };

    int failures = 0;
    int idx = 0;
    for (const auto& c : criteria) {
        ++idx;
        std::string why;
        auto t0 = std::chrono::steady_clock::now();
        bool ok = c.fn(why);
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (ok && secs > c.limit_s) {
            ok = false;
            why = "over time budget";
        }
        if (ok)
            std::printf("PASS %2d/10 %s (%.2fs/%.0fs)\n", idx, c.label, secs, c.limit_s);
        else
            std::printf("FAIL %2d/10 %s — %s (%.2fs/%.0fs)\n", idx, c.label, why.c_str(), secs,
                        c.limit_s);
        failures += ok ? 0 : 1;
    }
    return failures == 0 ? 0 : 1;
}
