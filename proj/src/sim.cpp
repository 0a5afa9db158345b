#include "sim.hpp"

#include <algorithm>

namespace forge {

const char* request_kind(const Request& req) {
    struct Visitor {
        const char* operator()(const AriaPut&) { return "aria_put"; }
        const char* operator()(const AriaGet&) { return "aria_get"; }
        const char* operator()(const PkvsPut&) { return "pkvs_put"; }
        const char* operator()(const PkvsGet&) { return "pkvs_get"; }
        const char* operator()(const PkvsSnapshot&) { return "pkvs_snapshot"; }
        const char* operator()(const PkvsRestore&) { return "pkvs_restore"; }
        const char* operator()(const BisgxStore&) { return "bisgx_store"; }
        const char* operator()(const BisgxQuery&) { return "bisgx_query"; }
        const char* operator()(const ProxyFetch&) { return "proxy_fetch"; }
        const char* operator()(const ShuffleItem&) { return "shuffle_item"; }
        const char* operator()(const ShuffleFlush&) { return "shuffle_flush"; }
    };
    return std::visit(Visitor{}, req);
}

class InstanceEnv : public Env {
public:
    InstanceEnv(Simulation& sim, Instance& inst) : sim_(sim), inst_(inst) {}

    uint64_t mc_increment(uint64_t counter_id) override {
        uint64_t v = sim_.platform(inst_.platform).mc_increment(counter_id);
        log("mc_increment").with("counter", counter_id).with("value", v);
        if (inst_.pause_after_mc_increment) {
            inst_.pause_after_mc_increment = false;
            inst_.paused = true;
            log("pause").with("trigger", "mc_increment");
        }
        return v;
    }

    uint64_t mc_read(uint64_t counter_id) override {
        uint64_t v = sim_.platform(inst_.platform).mc_read(counter_id);
        log("mc_read").with("counter", counter_id).with("value", v);
        return v;
    }

    SealedBlob seal(const Bytes& data, SealPolicy policy) override {
        SealedBlob blob = sim_.platform(inst_.platform).seal(inst_.identity, data, policy);
        log("seal")
            .with("policy", policy_name(policy))
            .with("seq", blob.seal_seq)
            .with("blob", crypto::hex8(blob.digest()));
        return blob;
    }

    Result<Bytes> unseal(const SealedBlob& blob) override {
        auto res = sim_.platform(inst_.platform).unseal(inst_.identity, blob);
        log("unseal")
            .with("blob", crypto::hex8(blob.digest()))
            .with("err", err_name(res.ok() ? Err::None : res.error()));
        return res;
    }

    const EnclaveIdentity& identity() const override { return inst_.identity; }
    uint32_t instance_index() const override { return inst_.index; }
    uint64_t step() const override { return sim_.step(); }
    CounterRng& rng() override { return inst_.rng; }
    HostStorage& host() override { return sim_.host(); }

    Event& log(std::string kind) override {
        return sim_.log().append(sim_.step(), std::move(kind)).with("instance", inst_.index);
    }

    void reply(const Message& msg, Err err, Bytes payload, uint64_t num) override {
        log("reply")
            .with("client", msg.client)
            .with("msg", msg.msg_id)
            .with("err", err_name(err))
            .with("num", num)
            .with("payload", printable(payload));
        sim_.push_reply(Reply{msg.msg_id, msg.client, err, std::move(payload), num});
    }

private:
    Simulation& sim_;
    Instance& inst_;
};

Simulation::Simulation(uint64_t seed, double noise_rate, DetectorConfig detector)
    : seed_(seed),
      noise_rate_(noise_rate),
      detector_(detector),
      rng_(seed),
      noise_rng_(CounterRng(seed).fork("noise")) {}

Platform& Simulation::platform(const std::string& name) {
    auto it = platforms_.find(name);
    if (it == platforms_.end())
        it = platforms_.emplace(name, Platform(PlatformId::from_name(name))).first;
    return it->second;
}

detect::CacheModel& Simulation::cache(const std::string& name) {
    auto it = caches_.find(name);
    if (it == caches_.end())
        it = caches_.emplace(name, detect::CacheModel(detector_.geometry)).first;
    return it->second;
}

Result<uint32_t> Simulation::launch(const std::string& platform_name, const EnclaveBinary& bin,
                                    bool registered) {
    EnclaveIdentity id = identity_of(bin);
    PlatformId pid = platform(platform_name).id();
    if (registered) {
        auto key = std::make_pair(pid, id.mrenclave);
        if (registry_.count(key)) {
            log_.append(step_, "launch_rejected")
                .with("platform", platform_name)
                .with("program", bin.program_name())
                .with("mrenclave", crypto::hex8(id.mrenclave))
                .with("err", err_name(Err::RegistryRejected));
            return Err::RegistryRejected;
        }
        registry_[key] = static_cast<uint32_t>(instances_.size());
    }

    auto program = make_program(bin.program_name());
    if (!program) return Err::ConfigError;

    auto inst = std::make_unique<Instance>();
    inst->index = static_cast<uint32_t>(instances_.size());
    inst->platform = platform_name;
    inst->binary = bin;
    inst->identity = id;
    inst->program = std::move(program);
    inst->rng = rng_.fork("instance:" + std::to_string(inst->index));

    if (detector_.enabled) {
        auto ch = detect::derive_channel(id, detector_.geometry, detector_.channel_sets);
        if (!ch.ok()) return ch.error();
        detect::build_eviction_sets(ch.value(), detector_.geometry);
        for (const auto& other : instances_) {
            if (!other->monitor || other->identity.mrenclave == id.mrenclave) continue;
            const auto& a = other->monitor->channel().set_indices;
            const auto& b = ch.value().set_indices;
            for (uint32_t s : b) {
                if (std::find(a.begin(), a.end(), s) != a.end()) {
                    log_.append(step_, "channel_collision")
                        .with("instance", other->index)
                        .with("with", inst->index)
                        .with("set", s);
                    break;
                }
            }
        }
        inst->monitor.emplace(ch.take(), inst->index);
        inst->monitor->prime(cache(platform_name));
    }

    instances_.push_back(std::move(inst));
    Instance& ref = *instances_.back();
    log_.append(step_, "launch")
        .with("instance", ref.index)
        .with("platform", platform_name)
        .with("program", bin.program_name())
        .with("mrenclave", crypto::hex8(id.mrenclave))
        .with("detector", detector_.enabled ? 1 : 0);
    InstanceEnv env(*this, ref);
    ref.program->init(env);
    return ref.index;
}

Status Simulation::teardown(uint32_t instance) {
    if (!valid_instance(instance)) return Err::UnknownInstance;
    Instance& inst = *instances_[instance];
    if (inst.torn_down) return Err::UnknownInstance;
    inst.torn_down = true;
    auto key = std::make_pair(platform(inst.platform).id(), inst.identity.mrenclave);
    auto it = registry_.find(key);
    if (it != registry_.end() && it->second == instance) registry_.erase(it);
    log_.append(step_, "teardown").with("instance", instance);
    return {};
}

Result<uint64_t> Simulation::establish_session(uint32_t client, uint32_t instance,
                                               const crypto::Digest32& expected_mrenclave) {
    if (!valid_instance(instance) || instances_[instance]->torn_down)
        return Err::UnknownInstance;
    Instance& inst = *instances_[instance];

    std::array<uint8_t, 64> report_data{};
    Bytes nonce = rng_.bytes(report_data.size());
    std::copy(nonce.begin(), nonce.end(), report_data.begin());
    Quote q = attest(inst.identity, report_data);
    if (!verify_quote(q) || q.identity.mrenclave != expected_mrenclave) {
        log_.append(step_, "session_rejected")
            .with("client", client)
            .with("instance", instance)
            .with("err", err_name(Err::AttestationFailed));
        return Err::AttestationFailed;
    }

    crypto::Key32 key{};
    Bytes kb = rng_.bytes(key.size());
    std::copy(kb.begin(), kb.end(), key.begin());
    sessions_[{client, instance}] = key;
    inst.session_keys[client] = key;
    log_.append(step_, "session").with("client", client).with("instance", instance);
    return (static_cast<uint64_t>(client) << 32) | instance;
}

Status Simulation::route(uint32_t client, uint32_t instance) {
    if (!valid_instance(instance) || instances_[instance]->torn_down)
        return Err::UnknownInstance;
    routing_[client] = instance;
    log_.append(step_, "route").with("client", client).with("instance", instance);
    return {};
}

Status Simulation::client_send(uint32_t client, Request req) {
    auto it = routing_.find(client);
    if (it == routing_.end()) return Err::ConfigError;
    uint32_t instance = it->second;
    if (instances_[instance]->torn_down) return Err::UnknownInstance;
    Message msg{next_msg_id_++, client, std::move(req)};
    log_.append(step_, "send")
        .with("client", client)
        .with("instance", instance)
        .with("msg", msg.msg_id)
        .with("kind", request_kind(msg.req));
    instances_[instance]->inbox.push_back(std::move(msg));
    return {};
}

Status Simulation::host_send(uint32_t instance, Request req) {
    if (!valid_instance(instance) || instances_[instance]->torn_down)
        return Err::UnknownInstance;
    Message msg{next_msg_id_++, kHostClient, std::move(req)};
    log_.append(step_, "send")
        .with("client", kHostClient)
        .with("instance", instance)
        .with("msg", msg.msg_id)
        .with("kind", request_kind(msg.req));
    instances_[instance]->inbox.push_back(std::move(msg));
    return {};
}

Status Simulation::pause(uint32_t instance) {
    if (!valid_instance(instance)) return Err::UnknownInstance;
    instances_[instance]->paused = true;
    log_.append(step_, "pause").with("instance", instance).with("trigger", "direct");
    return {};
}

Status Simulation::resume(uint32_t instance) {
    if (!valid_instance(instance)) return Err::UnknownInstance;
    instances_[instance]->paused = false;
    log_.append(step_, "resume").with("instance", instance);
    return {};
}

Status Simulation::arm_pause_after_mc_increment(uint32_t instance) {
    if (!valid_instance(instance)) return Err::UnknownInstance;
    instances_[instance]->pause_after_mc_increment = true;
    return {};
}

bool Simulation::has_session(uint32_t client, uint32_t instance) const {
    return sessions_.count({client, instance}) != 0;
}

void Simulation::push_reply(Reply r) {
    replies_[r.client].push_back(std::move(r));
}

const std::vector<Reply>& Simulation::replies(uint32_t client) const {
    static const std::vector<Reply> empty;
    auto it = replies_.find(client);
    return it == replies_.end() ? empty : it->second;
}

void Simulation::step_app(Instance& inst) {
    if (!inst.inflight) {
        if (inst.inbox.empty()) return;
        Message msg = std::move(inst.inbox.front());
        inst.inbox.pop_front();
        if (msg.client != kHostClient && !has_session(msg.client, inst.index)) {
            log_.append(step_, "deliver_rejected")
                .with("instance", inst.index)
                .with("client", msg.client)
                .with("msg", msg.msg_id)
                .with("err", err_name(Err::SessionError));
            push_reply(Reply{msg.msg_id, msg.client, Err::SessionError, {}, 0});
            return;
        }
        inst.inflight = OpContext{std::move(msg), 0, 0};
    }
    InstanceEnv env(*this, inst);
    inst.program->step(env, *inst.inflight);
    ++inst.app_steps;
    ++inst.inflight->phase;
    if (inst.inflight->phase >= inst.program->phases(inst.inflight->msg.req))
        inst.inflight.reset();
}

void Simulation::tick() {
    ++step_;
    for (auto& up : instances_) {
        Instance& inst = *up;
        if (!inst.runnable()) continue;
        if (inst.monitor) inst.monitor->probe(cache(inst.platform), step_);
        step_app(inst);
    }
    if (noise_rate_ > 0.0)
        for (auto& [name, c] : caches_) detect::noise_tick(c, noise_rate_, noise_rng_);
}

void Simulation::run_ticks(uint64_t n) {
    for (uint64_t i = 0; i < n; ++i) tick();
}

uint64_t Simulation::run_until_idle(uint64_t max_ticks) {
    uint64_t done = 0;
    auto busy = [&] {
        return std::any_of(instances_.begin(), instances_.end(),
                           [](const auto& i) { return i->runnable() && i->has_work(); });
    };
    while (done < max_ticks && busy()) {
        tick();
        ++done;
    }
    return done;
}

}  // namespace forge
