#pragma once

#include <memory>

#include "../program.hpp"

namespace forge::apps {

std::unique_ptr<EnclaveProgram> make_aria();
std::unique_ptr<EnclaveProgram> make_pkvs();
std::unique_ptr<EnclaveProgram> make_bisgx();
std::unique_ptr<EnclaveProgram> make_proxy();
std::unique_ptr<EnclaveProgram> make_shuffler();
std::unique_ptr<EnclaveProgram> make_idle();

}  // namespace forge::apps
