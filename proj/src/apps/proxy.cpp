#include <algorithm>
#include <set>

#include "../host_storage.hpp"
#include "apps.hpp"

namespace forge::apps {
namespace {

// Anonymizing proxy: decrypts the client request and forwards it to the
// backend tagged only with the instance ordinal. The egress side is
// plaintext, so every forwarded request lands in the host's observation log.
class ProxyProgram : public EnclaveProgram {
public:
    void step(Env& env, OpContext& op) override {
        const Message& msg = op.msg;
        auto* f = std::get_if<ProxyFetch>(&msg.req);
        if (!f) return env.reply(msg, Err::ConfigError);

        env.host().proxy_log.push_back({env.instance_index(), f->segment, env.step()});
        auto it = env.host().segments.find(f->segment);
        Err err = it == env.host().segments.end() ? Err::BackendError : Err::None;
        env.log("proxy_fetch")
            .with("client", msg.client)
            .with("segment", f->segment)
            .with("err", err_name(err));
        if (err != Err::None) return env.reply(msg, err);
        env.reply(msg, Err::None, it->second);
    }
};

// Batch shuffler: buffers inputs and, on the host's epoch signal, emits them
// in a seed-derived random order. Origin hiding is only as wide as the set
// of clients that fed this particular instance.
class ShufflerProgram : public EnclaveProgram {
public:
    void step(Env& env, OpContext& op) override {
        const Message& msg = op.msg;
        if (auto* in = std::get_if<ShuffleItem>(&msg.req)) {
            buffer_.emplace_back(msg.client, in->item);
            env.log("shuffle_in").with("client", msg.client);
            return env.reply(msg, Err::None);
        }
        if (std::holds_alternative<ShuffleFlush>(msg.req)) {
            if (!buffer_.empty()) {
                for (size_t i = buffer_.size() - 1; i > 0; --i) {
                    size_t j = env.rng().below(i + 1);
                    std::swap(buffer_[i], buffer_[j]);
                }
                ShuffleBatch batch;
                batch.instance = env.instance_index();
                batch.step = env.step();
                std::set<uint32_t> clients;
                for (auto& [client, item] : buffer_) {
                    clients.insert(client);
                    batch.items.push_back(std::move(item));
                }
                std::string joined;
                for (uint32_t c : clients) {
                    if (!joined.empty()) joined.push_back(',');
                    joined += std::to_string(c);
                }
                env.log("shuffle_emit")
                    .with("count", batch.items.size())
                    .with("clients", joined);
                env.host().shuffle_log.push_back(std::move(batch));
                buffer_.clear();
            }
            return env.reply(msg, Err::None);
        }
        env.reply(msg, Err::ConfigError);
    }

private:
    std::vector<std::pair<uint32_t, Bytes>> buffer_;
};

class IdleProgram : public EnclaveProgram {
public:
    void step(Env& env, OpContext& op) override { env.reply(op.msg, Err::ConfigError); }
};

}  // namespace

std::unique_ptr<EnclaveProgram> make_proxy() { return std::make_unique<ProxyProgram>(); }
std::unique_ptr<EnclaveProgram> make_shuffler() { return std::make_unique<ShufflerProgram>(); }
std::unique_ptr<EnclaveProgram> make_idle() { return std::make_unique<IdleProgram>(); }

}  // namespace forge::apps
