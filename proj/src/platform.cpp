#include "platform.hpp"

#include <algorithm>
#include <cstring>

namespace forge {

namespace {

constexpr std::string_view kSealLabel = "forge-seal-key-v1";
constexpr std::string_view kAttestLabel = "forge-attest-key-v1";

crypto::Key32 seal_key(const PlatformId& platform, SealPolicy policy,
                       const crypto::Digest32& component) {
    Bytes msg;
    msg.insert(msg.end(), platform.id.begin(), platform.id.end());
    msg.push_back(static_cast<uint8_t>(policy));
    msg.insert(msg.end(), component.begin(), component.end());
    return crypto::hmac_sha256(reinterpret_cast<const uint8_t*>(kSealLabel.data()),
                               kSealLabel.size(), msg.data(), msg.size());
}

// One signing key for the simulated quoting enclave; the adversary model has
// no quote forgery, only replay and mutation.
const crypto::Key32& attest_key() {
    static crypto::Key32 key = crypto::sha256(
        reinterpret_cast<const uint8_t*>(kAttestLabel.data()), kAttestLabel.size());
    return key;
}

Bytes seal_aad(const SealedBlob& blob) {
    Bytes aad;
    aad.insert(aad.end(), blob.sealer_platform.id.begin(), blob.sealer_platform.id.end());
    aad.push_back(static_cast<uint8_t>(blob.policy));
    aad.insert(aad.end(), blob.sealer_component.begin(), blob.sealer_component.end());
    append_u64_le(aad, blob.seal_seq);
    return aad;
}

Bytes quote_payload(const Quote& q) {
    Bytes msg;
    msg.insert(msg.end(), q.identity.mrenclave.begin(), q.identity.mrenclave.end());
    msg.insert(msg.end(), q.identity.mrsigner.begin(), q.identity.mrsigner.end());
    msg.insert(msg.end(), q.report_data.begin(), q.report_data.end());
    return msg;
}

}  // namespace

PlatformId PlatformId::from_name(std::string_view name) {
    Bytes msg = to_bytes("platform:");
    msg.insert(msg.end(), name.begin(), name.end());
    auto d = crypto::sha256(msg);
    PlatformId p;
    std::memcpy(p.id.data(), d.data(), p.id.size());
    return p;
}

EnclaveBinary EnclaveBinary::make(std::string_view program, std::string_view version,
                                  std::string_view signer) {
    EnclaveBinary bin;
    bin.code = to_bytes(program);
    bin.code.push_back(0);
    bin.code.insert(bin.code.end(), version.begin(), version.end());
    bin.signer = to_bytes(signer);
    return bin;
}

std::string EnclaveBinary::program_name() const {
    auto it = std::find(code.begin(), code.end(), uint8_t{0});
    return std::string(code.begin(), it);
}

EnclaveIdentity identity_of(const EnclaveBinary& bin) {
    EnclaveIdentity id;
    id.mrenclave = crypto::sha256(bin.code);
    id.mrsigner = crypto::sha256(bin.signer);
    return id;
}

crypto::Digest32 SealedBlob::digest() const {
    Bytes msg = seal_aad(*this);
    msg.insert(msg.end(), ciphertext.begin(), ciphertext.end());
    msg.insert(msg.end(), tag.begin(), tag.end());
    return crypto::sha256(msg);
}

SealedBlob Platform::seal(const EnclaveIdentity& sealer, const Bytes& data, SealPolicy policy) {
    SealedBlob blob;
    blob.policy = policy;
    blob.sealer_platform = id_;
    blob.sealer_component = policy == SealPolicy::MRENCLAVE ? sealer.mrenclave : sealer.mrsigner;
    blob.seal_seq = ++seal_seq_;

    auto key = seal_key(id_, policy, blob.sealer_component);
    Bytes sealed = crypto::aead_seal(key, blob.seal_seq, data, seal_aad(blob));
    blob.tag.assign(sealed.end() - 16, sealed.end());
    blob.ciphertext.assign(sealed.begin(), sealed.end() - 16);
    return blob;
}

Result<Bytes> Platform::unseal(const EnclaveIdentity& opener, const SealedBlob& blob) const {
    if (blob.sealer_platform != id_) return Err::CrossPlatform;
    const auto& component =
        blob.policy == SealPolicy::MRENCLAVE ? opener.mrenclave : opener.mrsigner;
    if (blob.sealer_component != component) return Err::IdentityMismatch;

    auto key = seal_key(id_, blob.policy, component);
    Bytes sealed = blob.ciphertext;
    sealed.insert(sealed.end(), blob.tag.begin(), blob.tag.end());
    auto pt = crypto::aead_open(key, blob.seal_seq, sealed, seal_aad(blob));
    if (!pt) return Err::Corrupt;
    return *pt;
}

Quote attest(const EnclaveIdentity& identity, const std::array<uint8_t, 64>& report_data) {
    Quote q;
    q.identity = identity;
    q.report_data = report_data;
    Bytes payload = quote_payload(q);
    q.signature = crypto::hmac_sha256(attest_key().data(), attest_key().size(),
                                      payload.data(), payload.size());
    return q;
}

bool verify_quote(const Quote& q) {
    Bytes payload = quote_payload(q);
    auto expect = crypto::hmac_sha256(attest_key().data(), attest_key().size(),
                                      payload.data(), payload.size());
    return expect == q.signature;
}

}  // namespace forge
