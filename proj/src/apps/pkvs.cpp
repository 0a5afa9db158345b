#include <map>

#include "../host_storage.hpp"
#include "apps.hpp"

namespace forge::apps {
namespace {

Bytes serialize_store(const std::map<std::string, Bytes>& store, uint64_t snapshot_mc) {
    Bytes out;
    append_u64_le(out, store.size());
    for (const auto& [k, v] : store) {
        append_bytes(out, to_bytes(k));
        append_bytes(out, v);
    }
    append_u64_le(out, snapshot_mc);
    return out;
}

bool parse_store(const Bytes& in, std::map<std::string, Bytes>& store, uint64_t& snapshot_mc) {
    size_t pos = 0;
    auto read_u64 = [&](uint64_t& v) {
        if (pos + 8 > in.size()) return false;
        v = read_u64_le(in.data() + pos);
        pos += 8;
        return true;
    };
    auto read_blob = [&](Bytes& b) {
        uint64_t n = 0;
        if (!read_u64(n) || pos + n > in.size()) return false;
        b.assign(in.begin() + static_cast<ptrdiff_t>(pos), in.begin() + static_cast<ptrdiff_t>(pos + n));
        pos += n;
        return true;
    };
    uint64_t count = 0;
    if (!read_u64(count)) return false;
    std::map<std::string, Bytes> parsed;
    for (uint64_t i = 0; i < count; ++i) {
        Bytes k, v;
        if (!read_blob(k) || !read_blob(v)) return false;
        parsed[to_string(k)] = std::move(v);
    }
    if (!read_u64(snapshot_mc) || pos != in.size()) return false;
    store = std::move(parsed);
    return true;
}

// Persistent KVS hardened against rollback: snapshots are sealed together
// with the next counter value and the counter is bumped right after, so only
// the latest snapshot restores. Clones restoring that latest snapshot all
// pass the check.
class PkvsProgram : public EnclaveProgram {
public:
    void step(Env& env, OpContext& op) override {
        uint64_t cid = identity_counter(env.identity());
        const Message& msg = op.msg;

        if (auto* p = std::get_if<PkvsPut>(&msg.req)) {
            store_[p->key] = p->value;
            env.log("pkvs_put")
                .with("client", msg.client)
                .with("key", p->key)
                .with("value", printable(p->value))
                .with("err", err_name(Err::None));
            return env.reply(msg, Err::None);
        }
        if (auto* g = std::get_if<PkvsGet>(&msg.req)) {
            auto it = store_.find(g->key);
            Err err = it == store_.end() ? Err::NotFound : Err::None;
            auto& ev = env.log("pkvs_get")
                           .with("client", msg.client)
                           .with("key", g->key)
                           .with("err", err_name(err));
            if (err != Err::None) return env.reply(msg, err);
            ev.with("value", printable(it->second));
            return env.reply(msg, Err::None, it->second);
        }
        if (std::holds_alternative<PkvsSnapshot>(msg.req)) {
            uint64_t next = env.mc_read(cid) + 1;
            SealedBlob blob = env.seal(serialize_store(store_, next), SealPolicy::MRENCLAVE);
            uint64_t index = env.host().pkvs_store(std::move(blob));
            env.mc_increment(cid);
            env.log("snapshot")
                .with("client", msg.client)
                .with("index", index)
                .with("snapshot_mc", next);
            return env.reply(msg, Err::None, {}, index);
        }
        if (auto* r = std::get_if<PkvsRestore>(&msg.req)) {
            auto fail = [&](Err err) {
                env.log("restore").with("index", r->snapshot_index).with("err", err_name(err));
                env.reply(msg, err);
            };
            if (r->snapshot_index >= env.host().pkvs_snapshots.size())
                return fail(Err::NotFound);
            auto plain = env.unseal(env.host().pkvs_snapshots[r->snapshot_index]);
            if (!plain.ok()) return fail(plain.error());
            std::map<std::string, Bytes> parsed;
            uint64_t snapshot_mc = 0;
            if (!parse_store(plain.value(), parsed, snapshot_mc)) return fail(Err::Corrupt);
            if (snapshot_mc != env.mc_read(cid)) return fail(Err::StaleSnapshot);
            store_ = std::move(parsed);
            env.log("restore")
                .with("index", r->snapshot_index)
                .with("snapshot_mc", snapshot_mc)
                .with("err", err_name(Err::None));
            return env.reply(msg, Err::None);
        }
        env.reply(msg, Err::ConfigError);
    }

private:
    std::map<std::string, Bytes> store_;
};

}  // namespace

std::unique_ptr<EnclaveProgram> make_pkvs() { return std::make_unique<PkvsProgram>(); }

}  // namespace forge::apps
