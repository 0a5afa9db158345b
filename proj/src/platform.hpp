#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <string>

#include "bytes.hpp"
#include "crypto.hpp"
#include "result.hpp"

namespace forge {

// MRENCLAVE / MRSIGNER pair. Clones share the full identity; only the
// instance ordinal tells them apart, and that never leaves the simulator.
struct EnclaveIdentity {
    crypto::Digest32 mrenclave{};
    crypto::Digest32 mrsigner{};

    bool operator==(const EnclaveIdentity&) const = default;
};

struct PlatformId {
    std::array<uint8_t, 16> id{};

    bool operator==(const PlatformId&) const = default;
    auto operator<=>(const PlatformId&) const = default;

    static PlatformId from_name(std::string_view name);
    std::string hex() const { return to_hex(id.data(), id.size()); }
};

// The loadable unit: code bytes determine MRENCLAVE, the signing key bytes
// determine MRSIGNER. The program name is embedded in the code image so the
// simulator can attach behavior to launched instances.
struct EnclaveBinary {
    Bytes code;
    Bytes signer;

    static EnclaveBinary make(std::string_view program, std::string_view version = "",
                              std::string_view signer = "dev-key-1");
    std::string program_name() const;
};

EnclaveIdentity identity_of(const EnclaveBinary& bin);

enum class SealPolicy : uint8_t { MRENCLAVE = 0, MRSIGNER = 1 };

inline const char* policy_name(SealPolicy p) {
    return p == SealPolicy::MRENCLAVE ? "MRENCLAVE" : "MRSIGNER";
}

// Authenticated ciphertext bound to (platform, policy-selected identity
// component). The binding header rides along in the clear and is covered by
// the AEAD tag; it classifies unseal failures, it does not grant access.
struct SealedBlob {
    Bytes ciphertext;
    SealPolicy policy = SealPolicy::MRENCLAVE;
    Bytes tag;

    PlatformId sealer_platform;
    crypto::Digest32 sealer_component{};
    uint64_t seal_seq = 0;

    crypto::Digest32 digest() const;
};

struct Quote {
    EnclaveIdentity identity;
    std::array<uint8_t, 64> report_data{};
    crypto::Digest32 signature{};
};

// Per-host state: monotonic counters and the seal nonce sequence.
class Platform {
public:
    explicit Platform(PlatformId id) : id_(id) {}

    const PlatformId& id() const { return id_; }

    // Counters are created lazily at 0 and shared by every instance on the
    // platform, whatever identity they run.
    uint64_t mc_increment(uint64_t counter_id) { return ++counters_[counter_id]; }
    uint64_t mc_read(uint64_t counter_id) { return counters_[counter_id]; }

    SealedBlob seal(const EnclaveIdentity& sealer, const Bytes& data, SealPolicy policy);
    Result<Bytes> unseal(const EnclaveIdentity& opener, const SealedBlob& blob) const;

private:
    PlatformId id_;
    std::map<uint64_t, uint64_t> counters_;
    uint64_t seal_seq_ = 0;
};

Quote attest(const EnclaveIdentity& identity, const std::array<uint8_t, 64>& report_data);
bool verify_quote(const Quote& q);

}  // namespace forge
