#pragma once

#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "detector/cache.hpp"
#include "detector/channel.hpp"
#include "event_log.hpp"
#include "host_storage.hpp"
#include "platform.hpp"
#include "program.hpp"

namespace forge {

struct DetectorConfig {
    bool enabled = false;
    detect::CacheGeometry geometry;
    uint32_t channel_sets = 16;
};

struct Instance {
    uint32_t index = 0;
    std::string platform;
    EnclaveBinary binary;
    EnclaveIdentity identity;
    std::unique_ptr<EnclaveProgram> program;
    CounterRng rng{0};

    std::deque<Message> inbox;
    std::optional<OpContext> inflight;
    bool paused = false;
    bool pause_after_mc_increment = false;
    bool torn_down = false;
    uint64_t app_steps = 0;

    std::map<uint32_t, crypto::Key32> session_keys;
    std::optional<detect::Monitor> monitor;

    bool runnable() const { return !torn_down && !paused; }
    bool has_work() const { return inflight.has_value() || !inbox.empty(); }
};

// Deterministic cooperative world: per tick every runnable instance takes at
// most one program phase (detector instances probe first), then the noise
// process churns each platform cache. Instances run in launch order, so the
// full event sequence is a pure function of (seed, script).
class Simulation {
public:
    explicit Simulation(uint64_t seed, double noise_rate = 0.0, DetectorConfig detector = {});

    Result<uint32_t> launch(const std::string& platform_name, const EnclaveBinary& bin,
                            bool registered = false);
    Status teardown(uint32_t instance);

    Result<uint64_t> establish_session(uint32_t client, uint32_t instance,
                                       const crypto::Digest32& expected_mrenclave);
    Status route(uint32_t client, uint32_t instance);
    Status client_send(uint32_t client, Request req);
    Status host_send(uint32_t instance, Request req);

    Status pause(uint32_t instance);
    Status resume(uint32_t instance);
    Status arm_pause_after_mc_increment(uint32_t instance);

    void tick();
    void run_ticks(uint64_t n);
    // Ticks until no runnable instance has queued or in-flight work.
    uint64_t run_until_idle(uint64_t max_ticks = 100000);

    uint64_t step() const { return step_; }
    uint64_t seed() const { return seed_; }
    double noise_rate() const { return noise_rate_; }
    const DetectorConfig& detector_config() const { return detector_; }

    EventLog& log() { return log_; }
    const EventLog& log() const { return log_; }
    HostStorage& host() { return host_; }
    Platform& platform(const std::string& name);
    detect::CacheModel& cache(const std::string& name);
    CounterRng& rng() { return rng_; }

    size_t instance_count() const { return instances_.size(); }
    Instance& instance(uint32_t idx) { return *instances_[idx]; }
    const Instance& instance(uint32_t idx) const { return *instances_[idx]; }

    const std::vector<Reply>& replies(uint32_t client) const;

private:
    friend class InstanceEnv;

    bool valid_instance(uint32_t idx) const { return idx < instances_.size(); }
    bool has_session(uint32_t client, uint32_t instance) const;
    void push_reply(Reply r);
    void step_app(Instance& inst);

    uint64_t seed_;
    double noise_rate_;
    DetectorConfig detector_;
    uint64_t step_ = 0;
    uint64_t next_msg_id_ = 1;

    CounterRng rng_;
    CounterRng noise_rng_;
    EventLog log_;
    HostStorage host_;

    std::map<std::string, Platform> platforms_;
    std::map<std::string, detect::CacheModel> caches_;
    std::vector<std::unique_ptr<Instance>> instances_;
    std::map<std::pair<uint32_t, uint32_t>, crypto::Key32> sessions_;  // (client, instance)
    std::map<uint32_t, uint32_t> routing_;                             // client -> instance
    std::map<uint32_t, std::vector<Reply>> replies_;
    std::map<std::pair<PlatformId, crypto::Digest32>, uint32_t> registry_;
};

std::unique_ptr<EnclaveProgram> make_program(const std::string& name);

}  // namespace forge
