#include "../sim.hpp"
#include "verdict.hpp"

namespace forge::attacks {
namespace {

std::string client_label(uint32_t c) {
    if (c >= 1 && c <= 26) return std::string(1, static_cast<char>('A' + c - 1));
    return std::to_string(c);
}

struct Run {
    explicit Run(const ScenarioConfig& cfg)
        : cfg(cfg),
          detector(cfg.mitigation == Mitigation::CloneDetector ||
                   cfg.category == Category::Detector),
          sim(cfg.seed, cfg.noise, DetectorConfig{detector, cfg.geometry, cfg.channel_sets}) {}

    // Launches up to cfg.clones instances of `bin` on one platform; the
    // registry mitigation turns every launch after the first into a reject.
    Status launch_clones(const EnclaveBinary& bin) {
        if (cfg.mc_base > 0) {
            uint64_t cid = identity_counter(identity_of(bin));
            auto& plat = sim.platform(kPlatform);
            for (uint64_t i = 0; i < cfg.mc_base; ++i) plat.mc_increment(cid);
        }
        for (uint32_t i = 0; i < cfg.clones; ++i) {
            auto r = launch_one(bin);
            if (!r.ok() && r.error() != Err::RegistryRejected) return r.error();
        }
        return instances.empty() ? Err::ConfigError : Err::None;
    }

    Result<uint32_t> launch_one(const EnclaveBinary& bin) {
        auto r = sim.launch(kPlatform, bin, cfg.mitigation == Mitigation::TrustedRegistry);
        if (r.ok())
            instances.push_back(r.value());
        else if (r.error() == Err::RegistryRejected)
            ++rejected;
        return r;
    }

    uint32_t target_of(uint32_t client) const {
        auto m = static_cast<uint32_t>(instances.size());
        uint32_t ordinal = client - 1;
        if (client - 1 < cfg.routing_override.size()) ordinal = cfg.routing_override[client - 1];
        return instances[ordinal % m];
    }

    Status connect(uint32_t client, uint32_t instance, const EnclaveBinary& bin) {
        auto s = sim.establish_session(client, instance, identity_of(bin).mrenclave);
        if (!s.ok()) return s.error();
        return sim.route(client, instance);
    }

    Status connect_all(const EnclaveBinary& bin, uint32_t clients) {
        for (uint32_t c = 1; c <= clients; ++c) {
            auto s = connect(c, target_of(c), bin);
            if (!s.ok()) return s;
        }
        return {};
    }

    void settle_detector() {
        if (!detector) return;
        uint64_t pad = cfg.detector_ticks ? cfg.detector_ticks : 2ULL * cfg.window;
        sim.run_ticks(pad);
    }

    Verdict finish() {
        Verdict v;
        v.category = cfg.category;
        v.app = cfg.app;
        v.launched = static_cast<uint32_t>(instances.size());
        v.rejected_launches = rejected;
        v.sim_steps = sim.step();
        v.events = sim.log().events();
        v.log_text = sim.log().text();
        v.evidence = derive_evidence(cfg.category, cfg.app, v.events);
        v.anonymity_sets = derive_anonymity_sets(cfg.app, v.events);
        v.violated = derive_violated(cfg.category, cfg.app, v.events);
        if (detector) {
            v.detector_ran = true;
            v.window = cfg.window;
            v.threshold = cfg.threshold
                              ? cfg.threshold
                              : detect::default_threshold(cfg.geometry, cfg.channel_sets,
                                                          cfg.window);
            detect::ThresholdClassifier clf{cfg.window, v.threshold};
            for (uint32_t idx : instances) {
                const auto& inst = sim.instance(idx);
                if (!inst.monitor) continue;
                InstanceTrace t;
                t.instance = idx;
                t.samples = inst.monitor->trace();
                auto d = detect::classify(t.samples, clf);
                if (d.ok()) t.decisions = d.take();
                if (detect::any_flagged(t.decisions)) v.detected = true;
                v.traces.push_back(std::move(t));
            }
        }
        return v;
    }

    static constexpr const char* kPlatform = "host-A";

    const ScenarioConfig& cfg;
    bool detector = false;
    Simulation sim;
    std::vector<uint32_t> instances;
    uint32_t rejected = 0;
};

Result<Verdict> run_fim(const ScenarioConfig& cfg) {
    if (cfg.app != "aria") return Err::ConfigError;
    Run run(cfg);
    EnclaveBinary bin = EnclaveBinary::make("aria");
    if (auto s = run.launch_clones(bin); !s.ok()) return s.error();
    if (auto s = run.connect_all(bin, cfg.clients); !s.ok()) return s.error();

    for (uint32_t c = 1; c <= cfg.clients; ++c) {
        run.sim.client_send(c, AriaPut{"k", to_bytes("v" + client_label(c))});
        run.sim.run_until_idle();
    }
    run.sim.client_send(1, AriaGet{"k"});
    run.sim.run_until_idle();

    run.settle_detector();
    return run.finish();
}

Result<Verdict> run_forkvs_bisgx(const ScenarioConfig& cfg) {
    Run run(cfg);
    EnclaveBinary bin = EnclaveBinary::make("bisgx");
    if (auto s = run.launch_clones(bin); !s.ok()) return s.error();
    auto owners = static_cast<uint32_t>(run.instances.size());
    for (uint32_t c = 1; c <= owners; ++c) {
        if (auto s = run.connect(c, run.instances[c - 1], bin); !s.ok()) return s.error();
    }

    auto data_of = [](uint32_t c) {
        Bytes d;
        for (uint64_t i = 1; i <= 3; ++i) append_u64_le(d, 10ULL * c + i);
        return d;
    };

    if (owners >= 2 && cfg.inject_pause) {
        run.sim.arm_pause_after_mc_increment(run.instances[0]);
        for (uint32_t c = 1; c <= owners; ++c)
            run.sim.client_send(c, BisgxStore{data_of(c)});
        run.sim.run_ticks(1);  // every instance increments; the first then sits paused
        run.sim.resume(run.instances[0]);
        run.sim.run_until_idle();
    } else {
        for (uint32_t c = 1; c <= owners; ++c) {
            run.sim.client_send(c, BisgxStore{data_of(c)});
            run.sim.run_until_idle();
        }
    }

    // The host answers the same index with whichever record it likes; after
    // the interleaving both answers pass the index check.
    const auto& acks = run.sim.replies(1);
    if (!acks.empty()) {
        uint64_t index = acks.back().num;
        run.sim.client_send(1, BisgxQuery{index, "sum"});
        run.sim.run_until_idle();
        run.sim.host().bisgx_serve_latest = true;
        run.sim.client_send(1, BisgxQuery{index, "sum"});
        run.sim.run_until_idle();
    }

    run.settle_detector();
    return run.finish();
}

Result<Verdict> run_forkvs_pkvs(const ScenarioConfig& cfg) {
    Run run(cfg);
    EnclaveBinary bin = EnclaveBinary::make("pkvs");

    if (cfg.clones <= 1) {
        // Benign restart: snapshot, crash, restore on a fresh instance.
        if (auto r = run.launch_one(bin); !r.ok()) return r.error();
        if (auto s = run.connect(1, run.instances[0], bin); !s.ok()) return s.error();
        run.sim.client_send(1, PkvsPut{"k", to_bytes("v1")});
        run.sim.run_until_idle();
        run.sim.client_send(1, PkvsSnapshot{});
        run.sim.run_until_idle();
        run.sim.teardown(run.instances[0]);
        auto fresh = run.launch_one(bin);
        if (!fresh.ok()) return fresh.error();
        run.sim.host_send(fresh.value(), PkvsRestore{0});
        run.sim.run_until_idle();
        if (auto s = run.connect(1, fresh.value(), bin); !s.ok()) return s.error();
        run.sim.client_send(1, PkvsGet{"k"});
        run.sim.run_until_idle();
        run.settle_detector();
        return run.finish();
    }

    // Fork: snapshot early state, bring up clones from that same snapshot,
    // let the client advance one instance, then re-route it to another.
    if (auto r = run.launch_one(bin); !r.ok()) return r.error();
    uint32_t first = run.instances[0];
    if (auto s = run.connect(1, first, bin); !s.ok()) return s.error();
    run.sim.client_send(1, PkvsPut{"k", to_bytes("v0")});
    run.sim.run_until_idle();
    run.sim.client_send(1, PkvsSnapshot{});
    run.sim.run_until_idle();

    for (uint32_t i = 1; i < cfg.clones; ++i) {
        auto r = run.launch_one(bin);
        if (!r.ok()) continue;
        run.sim.host_send(r.value(), PkvsRestore{0});
        run.sim.run_until_idle();
    }

    run.sim.client_send(1, PkvsPut{"k", to_bytes("v1")});
    run.sim.run_until_idle();

    if (run.instances.size() >= 2) {
        uint32_t second = run.instances[1];
        if (auto s = run.connect(1, second, bin); !s.ok()) return s.error();
        run.sim.client_send(1, PkvsGet{"k"});
        run.sim.run_until_idle();
    } else {
        run.sim.client_send(1, PkvsGet{"k"});
        run.sim.run_until_idle();
    }

    run.settle_detector();
    return run.finish();
}

Result<Verdict> run_bug(const ScenarioConfig& cfg) {
    if (cfg.app != "proxy" && cfg.app != "shuffler") return Err::ConfigError;
    Run run(cfg);
    EnclaveBinary bin = EnclaveBinary::make(cfg.app);

    if (cfg.app == "proxy")
        for (uint32_t c = 1; c <= cfg.clients; ++c)
            run.sim.host().segments["seg-" + std::to_string(c)] =
                to_bytes("segment-data-" + std::to_string(c));

    if (auto s = run.launch_clones(bin); !s.ok()) return s.error();
    if (auto s = run.connect_all(bin, cfg.clients); !s.ok()) return s.error();

    for (uint32_t c = 1; c <= cfg.clients; ++c) {
        if (cfg.app == "proxy")
            run.sim.client_send(c, ProxyFetch{"seg-" + std::to_string(c)});
        else
            run.sim.client_send(c, ShuffleItem{to_bytes("item-" + std::to_string(c))});
        run.sim.run_until_idle();
    }
    if (cfg.app == "shuffler") {
        for (uint32_t idx : run.instances) {
            run.sim.host_send(idx, ShuffleFlush{});
            run.sim.run_until_idle();
        }
    }

    run.settle_detector();
    return run.finish();
}

Result<Verdict> run_detector_bench(const ScenarioConfig& cfg) {
    Run run(cfg);
    EnclaveBinary bin = EnclaveBinary::make("idle");
    if (auto s = run.launch_clones(bin); !s.ok()) return s.error();
    run.sim.run_ticks(cfg.detector_ticks ? cfg.detector_ticks : 2ULL * cfg.window);
    return run.finish();
}

}  // namespace

Result<Verdict> run_scenario(const ScenarioConfig& cfg) {
    if (cfg.clones < 1 || cfg.clients < 1) return Err::ConfigError;
    if (cfg.noise < 0.0 || cfg.noise > 1.0) return Err::ConfigError;
    if (cfg.window < 1) return Err::ConfigError;
    switch (cfg.category) {
        case Category::FIm: return run_fim(cfg);
        case Category::ForKVS:
            if (cfg.app == "bisgx") return run_forkvs_bisgx(cfg);
            if (cfg.app == "pkvs") return run_forkvs_pkvs(cfg);
            return Err::ConfigError;
        case Category::BUG: return run_bug(cfg);
        case Category::Detector: return run_detector_bench(cfg);
    }
    return Err::ConfigError;
}

Result<Verdict> run_mitigated(const ScenarioConfig& cfg) {
    if (cfg.mitigation == Mitigation::None) return Err::ConfigError;
    return run_scenario(cfg);
}

}  // namespace forge::attacks
