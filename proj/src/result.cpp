#include "result.hpp"

namespace forge {

const char* err_name(Err e) {
    switch (e) {
        case Err::None: return "None";
        case Err::CrossPlatform: return "CrossPlatform";
        case Err::IdentityMismatch: return "IdentityMismatch";
        case Err::Corrupt: return "Corrupt";
        case Err::UnknownInstance: return "UnknownInstance";
        case Err::AttestationFailed: return "AttestationFailed";
        case Err::SessionError: return "SessionError";
        case Err::NotFound: return "NotFound";
        case Err::IntegrityError: return "IntegrityError";
        case Err::StaleSnapshot: return "StaleSnapshot";
        case Err::IndexMismatch: return "IndexMismatch";
        case Err::UnsealError: return "UnsealError";
        case Err::BackendError: return "BackendError";
        case Err::RegistryRejected: return "RegistryRejected";
        case Err::ConfigError: return "ConfigError";
        case Err::GeometryError: return "GeometryError";
        case Err::InsufficientTrace: return "InsufficientTrace";
        case Err::DegenerateLabels: return "DegenerateLabels";
    }
    return "Unknown";
}

}  // namespace forge
