#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <variant>

#include "bytes.hpp"
#include "event_log.hpp"
#include "platform.hpp"
#include "result.hpp"
#include "rng.hpp"

namespace forge {

struct HostStorage;

// Client ordinal reserved for host-initiated calls (restore, flush); these
// bypass the session check because they model untrusted-host entry points.
constexpr uint32_t kHostClient = 0;

struct AriaPut {
    std::string key;
    Bytes value;
};
struct AriaGet {
    std::string key;
    bool full_verify = false;  // skip the counter cache, force the Merkle path
};
struct PkvsPut {
    std::string key;
    Bytes value;
};
struct PkvsGet {
    std::string key;
};
struct PkvsSnapshot {};
struct PkvsRestore {
    uint64_t snapshot_index = 0;
};
struct BisgxStore {
    Bytes data;  // little-endian int64 list
};
struct BisgxQuery {
    uint64_t index = 0;
    std::string fn;  // count | sum | mean
};
struct ProxyFetch {
    std::string segment;
};
struct ShuffleItem {
    Bytes item;
};
struct ShuffleFlush {};

using Request = std::variant<AriaPut, AriaGet, PkvsPut, PkvsGet, PkvsSnapshot, PkvsRestore,
                             BisgxStore, BisgxQuery, ProxyFetch, ShuffleItem, ShuffleFlush>;

const char* request_kind(const Request& req);

struct Message {
    uint64_t msg_id = 0;
    uint32_t client = kHostClient;
    Request req;
};

struct Reply {
    uint64_t msg_id = 0;
    uint32_t client = kHostClient;
    Err err = Err::None;
    Bytes payload;
    uint64_t num = 0;
};

// One in-flight request. Multi-phase operations advance one phase per
// scheduler tick; scratch carries values across phases.
struct OpContext {
    Message msg;
    uint32_t phase = 0;
    uint64_t scratch = 0;
};

// What a program sees of the world: its own platform primitives, its
// untrusted host storage, and a reply channel. Nothing here reaches another
// instance's runtime state.
class Env {
public:
    virtual ~Env() = default;

    virtual uint64_t mc_increment(uint64_t counter_id) = 0;
    virtual uint64_t mc_read(uint64_t counter_id) = 0;
    virtual SealedBlob seal(const Bytes& data, SealPolicy policy) = 0;
    virtual Result<Bytes> unseal(const SealedBlob& blob) = 0;

    virtual const EnclaveIdentity& identity() const = 0;
    virtual uint32_t instance_index() const = 0;
    virtual uint64_t step() const = 0;
    virtual CounterRng& rng() = 0;
    virtual HostStorage& host() = 0;

    virtual Event& log(std::string kind) = 0;
    virtual void reply(const Message& msg, Err err, Bytes payload = {}, uint64_t num = 0) = 0;
};

class EnclaveProgram {
public:
    virtual ~EnclaveProgram() = default;

    virtual void init(Env&) {}
    virtual uint32_t phases(const Request&) const { return 1; }
    virtual void step(Env& env, OpContext& op) = 0;
};

// Counter id shared by all clones of one binary: the attacks hinge on clones
// addressing the same platform counter.
inline uint64_t identity_counter(const EnclaveIdentity& id) {
    return read_u64_le(id.mrenclave.data());
}

}  // namespace forge
