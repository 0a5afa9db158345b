#pragma once

#include <string>

#include <doctest.h>

#include "sim.hpp"

namespace testutil {

inline forge::EnclaveBinary bin(const std::string& program) {
    return forge::EnclaveBinary::make(program);
}

inline uint32_t launch(forge::Simulation& sim, const std::string& program,
                       const std::string& platform = "host-A") {
    auto r = sim.launch(platform, bin(program));
    REQUIRE(r.ok());
    return r.value();
}

inline void connect(forge::Simulation& sim, uint32_t client, uint32_t instance) {
    auto s = sim.establish_session(client, instance,
                                   forge::identity_of(sim.instance(instance).binary).mrenclave);
    REQUIRE(s.ok());
    REQUIRE(sim.route(client, instance).ok());
}

inline const forge::Reply& last_reply(const forge::Simulation& sim, uint32_t client) {
    const auto& rs = sim.replies(client);
    REQUIRE(!rs.empty());
    return rs.back();
}

inline const forge::Reply& send_and_wait(forge::Simulation& sim, uint32_t client,
                                         forge::Request req) {
    REQUIRE(sim.client_send(client, std::move(req)).ok());
    sim.run_until_idle();
    return last_reply(sim, client);
}

}  // namespace testutil
