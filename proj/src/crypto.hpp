#pragma once

#include <array>
#include <cstdint>
#include <optional>

#include "bytes.hpp"

namespace forge::crypto {

using Digest32 = std::array<uint8_t, 32>;
using Key32 = std::array<uint8_t, 32>;

Digest32 sha256(const uint8_t* data, size_t len);
Digest32 sha256(const Bytes& data);

// HMAC-SHA256, the single keyed primitive behind key derivation and MACs.
Digest32 hmac_sha256(const uint8_t* key, size_t key_len, const uint8_t* msg, size_t msg_len);
Digest32 hmac_sha256(const Key32& key, const Bytes& msg);

// AES-256-GCM with caller-supplied deterministic IV (12 bytes used from iv64 + 4 zero bytes).
// Returns ciphertext || 16-byte tag.
Bytes aead_seal(const Key32& key, uint64_t iv64, const Bytes& plaintext, const Bytes& aad);
std::optional<Bytes> aead_open(const Key32& key, uint64_t iv64, const Bytes& sealed, const Bytes& aad);

// AES-256-CTR keystream XOR, IV from the 16-byte nonce.
Bytes ctr_xor(const Key32& key, const std::array<uint8_t, 16>& nonce, const Bytes& data);

inline std::string hex8(const Digest32& d) { return to_hex(d.data(), 8); }
inline std::string hex(const Digest32& d) { return to_hex(d.data(), d.size()); }

}  // namespace forge::crypto
