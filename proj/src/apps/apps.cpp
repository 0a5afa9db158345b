#include "apps.hpp"

#include "../sim.hpp"

namespace forge {

std::unique_ptr<EnclaveProgram> make_program(const std::string& name) {
    if (name == "aria") return apps::make_aria();
    if (name == "pkvs") return apps::make_pkvs();
    if (name == "bisgx") return apps::make_bisgx();
    if (name == "proxy") return apps::make_proxy();
    if (name == "shuffler") return apps::make_shuffler();
    if (name == "idle") return apps::make_idle();
    return nullptr;
}

}  // namespace forge
