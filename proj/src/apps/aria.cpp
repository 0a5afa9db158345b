#include <algorithm>
#include <list>
#include <optional>

#include "../host_storage.hpp"
#include "apps.hpp"

namespace forge::apps {
namespace {

constexpr size_t kCounterCacheCapacity = 64;

std::array<uint8_t, 16> entry_nonce(uint64_t counter) {
    std::array<uint8_t, 16> nonce{};
    for (int i = 0; i < 8; ++i) nonce[i] = static_cast<uint8_t>(counter >> (8 * i));
    return nonce;
}

crypto::Digest32 leaf_hash(const std::string& key, uint64_t counter) {
    Bytes buf = to_bytes("aria-leaf");
    append_bytes(buf, to_bytes(key));
    append_u64_le(buf, counter);
    return crypto::sha256(buf);
}

// Binary tree over (key, counter) leaves in key order, duplicating the last
// node on odd levels; the root is the enclave's only global trust anchor.
crypto::Digest32 merkle_root(const std::vector<std::pair<std::string, uint64_t>>& sorted) {
    if (sorted.empty()) return crypto::sha256(to_bytes("aria-empty"));
    std::vector<crypto::Digest32> level;
    level.reserve(sorted.size());
    for (const auto& [k, c] : sorted) level.push_back(leaf_hash(k, c));
    while (level.size() > 1) {
        if (level.size() % 2 != 0) level.push_back(level.back());
        std::vector<crypto::Digest32> next;
        next.reserve(level.size() / 2);
        for (size_t i = 0; i < level.size(); i += 2) {
            Bytes buf = to_bytes("aria-node");
            buf.insert(buf.end(), level[i].begin(), level[i].end());
            buf.insert(buf.end(), level[i + 1].begin(), level[i + 1].end());
            next.push_back(crypto::sha256(buf));
        }
        level = std::move(next);
    }
    return level[0];
}

class AriaProgram : public EnclaveProgram {
public:
    void init(Env& env) override {
        Bytes dk = env.rng().bytes(data_key_.size());
        std::copy(dk.begin(), dk.end(), data_key_.begin());
        Bytes mk = env.rng().bytes(mac_key_.size());
        std::copy(mk.begin(), mk.end(), mac_key_.begin());
        root_ = merkle_root({});
    }

    void step(Env& env, OpContext& op) override {
        if (auto* p = std::get_if<AriaPut>(&op.msg.req)) return do_put(env, op.msg, *p);
        if (auto* g = std::get_if<AriaGet>(&op.msg.req)) return do_get(env, op.msg, *g);
        env.reply(op.msg, Err::ConfigError);
    }

private:
    using Table = std::map<std::string, AriaEntry>;

    bool table_matches_root(const Table& t) const {
        std::vector<std::pair<std::string, uint64_t>> counters;
        counters.reserve(t.size());
        for (const auto& [k, e] : t) counters.emplace_back(k, e.entry_counter);
        return merkle_root(counters) == root_;
    }

    Bytes entry_mac(const std::string& key, uint64_t counter, const Bytes& ciphertext) const {
        Bytes buf;
        append_bytes(buf, to_bytes(key));
        append_u64_le(buf, counter);
        append_bytes(buf, ciphertext);
        crypto::Digest32 mac = crypto::hmac_sha256(mac_key_, buf);
        return Bytes(mac.begin(), mac.end());
    }

    std::optional<uint64_t> cache_get(const std::string& key) {
        for (auto it = cache_.begin(); it != cache_.end(); ++it) {
            if (it->first == key) {
                cache_.splice(cache_.begin(), cache_, it);
                return cache_.front().second;
            }
        }
        return std::nullopt;
    }

    void cache_put(const std::string& key, uint64_t counter) {
        for (auto it = cache_.begin(); it != cache_.end(); ++it) {
            if (it->first == key) {
                it->second = counter;
                cache_.splice(cache_.begin(), cache_, it);
                return;
            }
        }
        cache_.emplace_front(key, counter);
        if (cache_.size() > kCounterCacheCapacity) cache_.pop_back();
    }

    void do_put(Env& env, const Message& msg, const AriaPut& p) {
        Table& t = env.host().aria_view(env.instance_index());
        if (!table_matches_root(t)) {
            env.log("aria_put").with("client", msg.client).with("key", p.key).with(
                "err", err_name(Err::IntegrityError));
            return env.reply(msg, Err::IntegrityError);
        }
        uint64_t ctr = next_counter_++;
        AriaEntry e;
        e.entry_counter = ctr;
        e.ciphertext = crypto::ctr_xor(data_key_, entry_nonce(ctr), p.value);
        e.mac = entry_mac(p.key, ctr, e.ciphertext);
        t[p.key] = std::move(e);
        std::vector<std::pair<std::string, uint64_t>> counters;
        counters.reserve(t.size());
        for (const auto& [k, entry] : t) counters.emplace_back(k, entry.entry_counter);
        root_ = merkle_root(counters);
        cache_put(p.key, ctr);
        env.log("aria_put")
            .with("client", msg.client)
            .with("key", p.key)
            .with("value", printable(p.value))
            .with("ctr", ctr)
            .with("err", err_name(Err::None));
        env.reply(msg, Err::None, {}, ctr);
    }

    void do_get(Env& env, const Message& msg, const AriaGet& g) {
        Table& t = env.host().aria_view(env.instance_index());
        auto fail = [&](Err err, const char* path) {
            env.log("aria_get")
                .with("client", msg.client)
                .with("key", g.key)
                .with("path", path)
                .with("err", err_name(err));
            env.reply(msg, err);
        };

        const AriaEntry* entry = nullptr;
        uint64_t ctr = 0;
        const char* path = "full";
        std::optional<uint64_t> cached;
        if (!g.full_verify) cached = cache_get(g.key);
        if (cached) {
            path = "cache";
            auto it = t.find(g.key);
            if (it == t.end() || it->second.entry_counter != *cached)
                return fail(Err::IntegrityError, path);
            entry = &it->second;
            ctr = *cached;
        } else {
            if (!table_matches_root(t)) return fail(Err::IntegrityError, path);
            auto it = t.find(g.key);
            if (it == t.end()) return fail(Err::NotFound, path);
            entry = &it->second;
            ctr = entry->entry_counter;
        }
        if (entry_mac(g.key, ctr, entry->ciphertext) != entry->mac)
            return fail(Err::IntegrityError, path);
        Bytes value = crypto::ctr_xor(data_key_, entry_nonce(ctr), entry->ciphertext);
        cache_put(g.key, ctr);
        env.log("aria_get")
            .with("client", msg.client)
            .with("key", g.key)
            .with("path", path)
            .with("err", err_name(Err::None))
            .with("value", printable(value));
        env.reply(msg, Err::None, std::move(value));
    }

    crypto::Key32 data_key_{};
    crypto::Key32 mac_key_{};
    crypto::Digest32 root_{};
    uint64_t next_counter_ = 1;
    std::list<std::pair<std::string, uint64_t>> cache_;  // MRU first
};

}  // namespace

std::unique_ptr<EnclaveProgram> make_aria() { return std::make_unique<AriaProgram>(); }

}  // namespace forge::apps
