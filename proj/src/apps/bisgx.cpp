#include "../host_storage.hpp"
#include "apps.hpp"

namespace forge::apps {
namespace {

std::vector<int64_t> parse_ints(const uint8_t* data, size_t len) {
    std::vector<int64_t> out;
    out.reserve(len / 8);
    for (size_t i = 0; i + 8 <= len; i += 8)
        out.push_back(static_cast<int64_t>(read_u64_le(data + i)));
    return out;
}

// Inc-then-store: bump the shared counter, read it back, and use the read
// value as the record index sealed alongside the data. The read is a second
// step, which is exactly the window the cloning interleaving exploits.
class BisgxProgram : public EnclaveProgram {
public:
    uint32_t phases(const Request& req) const override {
        return std::holds_alternative<BisgxStore>(req) ? 3 : 1;
    }

    void step(Env& env, OpContext& op) override {
        uint64_t cid = identity_counter(env.identity());
        const Message& msg = op.msg;

        if (auto* s = std::get_if<BisgxStore>(&msg.req)) {
            switch (op.phase) {
                case 0:
                    env.mc_increment(cid);
                    break;
                case 1:
                    op.scratch = env.mc_read(cid);
                    break;
                case 2: {
                    uint64_t index = op.scratch;
                    Bytes plain;
                    append_u64_le(plain, index);
                    plain.insert(plain.end(), s->data.begin(), s->data.end());
                    SealedBlob blob = env.seal(plain, SealPolicy::MRENCLAVE);
                    std::string digest = crypto::hex8(blob.digest());
                    env.host().bisgx_append(index, std::move(blob));
                    env.log("bisgx_accept")
                        .with("client", msg.client)
                        .with("index", index)
                        .with("blob", digest);
                    env.reply(msg, Err::None, {}, index);
                    break;
                }
            }
            return;
        }
        if (auto* q = std::get_if<BisgxQuery>(&msg.req)) return do_query(env, msg, *q);
        env.reply(msg, Err::ConfigError);
    }

private:
    void do_query(Env& env, const Message& msg, const BisgxQuery& q) {
        auto finish = [&](Err err, int64_t result) {
            auto& ev = env.log("bisgx_query")
                           .with("client", msg.client)
                           .with("index", q.index)
                           .with("fn", q.fn)
                           .with("err", err_name(err));
            if (err != Err::None) return env.reply(msg, err);
            ev.with("result", std::to_string(result));
            env.reply(msg, Err::None, {}, static_cast<uint64_t>(result));
        };

        const SealedBlob* blob = env.host().bisgx_fetch(q.index);
        if (!blob) return finish(Err::NotFound, 0);
        auto plain = env.unseal(*blob);
        if (!plain.ok()) return finish(Err::UnsealError, 0);
        const Bytes& pt = plain.value();
        if (pt.size() < 8 || (pt.size() - 8) % 8 != 0) return finish(Err::UnsealError, 0);
        uint64_t sealed_index = read_u64_le(pt.data());
        if (sealed_index != q.index) return finish(Err::IndexMismatch, 0);

        std::vector<int64_t> ints = parse_ints(pt.data() + 8, pt.size() - 8);
        int64_t n = static_cast<int64_t>(ints.size());
        if (q.fn == "count") return finish(Err::None, n);
        int64_t sum = 0;
        for (int64_t v : ints) sum += v;
        if (q.fn == "sum") return finish(Err::None, sum);
        if (q.fn == "mean") return finish(Err::None, n == 0 ? 0 : sum / n);
        return finish(Err::ConfigError, 0);
    }
};

}  // namespace

std::unique_ptr<EnclaveProgram> make_bisgx() { return std::make_unique<BisgxProgram>(); }

}  // namespace forge::apps
