#include "crypto.hpp"

#include <openssl/evp.h>
#include <openssl/hmac.h>
#include <openssl/sha.h>

#include <cstring>
#include <stdexcept>

namespace forge::crypto {

Digest32 sha256(const uint8_t* data, size_t len) {
    Digest32 out{};
    SHA256(data, len, out.data());
    return out;
}

Digest32 sha256(const Bytes& data) {
    return sha256(data.data(), data.size());
}

Digest32 hmac_sha256(const uint8_t* key, size_t key_len, const uint8_t* msg, size_t msg_len) {
    Digest32 out{};
    unsigned int out_len = 0;
    if (!HMAC(EVP_sha256(), key, static_cast<int>(key_len), msg, msg_len, out.data(), &out_len) ||
        out_len != out.size()) {
        throw std::runtime_error("HMAC-SHA256 failed");
    }
    return out;
}

Digest32 hmac_sha256(const Key32& key, const Bytes& msg) {
    return hmac_sha256(key.data(), key.size(), msg.data(), msg.size());
}

namespace {

struct CipherCtx {
    EVP_CIPHER_CTX* ctx;
    CipherCtx() : ctx(EVP_CIPHER_CTX_new()) {
        if (!ctx) throw std::runtime_error("EVP_CIPHER_CTX_new failed");
    }
    ~CipherCtx() { EVP_CIPHER_CTX_free(ctx); }
    CipherCtx(const CipherCtx&) = delete;
    CipherCtx& operator=(const CipherCtx&) = delete;
};

std::array<uint8_t, 12> gcm_iv(uint64_t iv64) {
    std::array<uint8_t, 12> iv{};
    for (int i = 0; i < 8; ++i) iv[i] = static_cast<uint8_t>(iv64 >> (8 * i));
    return iv;
}

}  // namespace

Bytes aead_seal(const Key32& key, uint64_t iv64, const Bytes& plaintext, const Bytes& aad) {
    CipherCtx c;
    auto iv = gcm_iv(iv64);
    if (EVP_EncryptInit_ex(c.ctx, EVP_aes_256_gcm(), nullptr, key.data(), iv.data()) != 1)
        throw std::runtime_error("GCM init failed");

    int len = 0;
    if (!aad.empty() && EVP_EncryptUpdate(c.ctx, nullptr, &len, aad.data(), static_cast<int>(aad.size())) != 1)
        throw std::runtime_error("GCM aad failed");

    Bytes out(plaintext.size() + 16);
    int ct_len = 0;
    if (!plaintext.empty()) {
        if (EVP_EncryptUpdate(c.ctx, out.data(), &len, plaintext.data(), static_cast<int>(plaintext.size())) != 1)
            throw std::runtime_error("GCM encrypt failed");
        ct_len = len;
    }
    if (EVP_EncryptFinal_ex(c.ctx, out.data() + ct_len, &len) != 1)
        throw std::runtime_error("GCM final failed");
    ct_len += len;
    if (EVP_CIPHER_CTX_ctrl(c.ctx, EVP_CTRL_GCM_GET_TAG, 16, out.data() + ct_len) != 1)
        throw std::runtime_error("GCM tag failed");
    out.resize(static_cast<size_t>(ct_len) + 16);
    return out;
}

std::optional<Bytes> aead_open(const Key32& key, uint64_t iv64, const Bytes& sealed, const Bytes& aad) {
    if (sealed.size() < 16) return std::nullopt;
    CipherCtx c;
    auto iv = gcm_iv(iv64);
    if (EVP_DecryptInit_ex(c.ctx, EVP_aes_256_gcm(), nullptr, key.data(), iv.data()) != 1)
        return std::nullopt;

    int len = 0;
    if (!aad.empty() && EVP_DecryptUpdate(c.ctx, nullptr, &len, aad.data(), static_cast<int>(aad.size())) != 1)
        return std::nullopt;

    size_t ct_len = sealed.size() - 16;
    Bytes out(ct_len);
    int pt_len = 0;
    if (ct_len > 0) {
        if (EVP_DecryptUpdate(c.ctx, out.data(), &len, sealed.data(), static_cast<int>(ct_len)) != 1)
            return std::nullopt;
        pt_len = len;
    }
    Bytes tag(sealed.end() - 16, sealed.end());
    if (EVP_CIPHER_CTX_ctrl(c.ctx, EVP_CTRL_GCM_SET_TAG, 16, tag.data()) != 1)
        return std::nullopt;
    if (EVP_DecryptFinal_ex(c.ctx, out.data() + pt_len, &len) != 1)
        return std::nullopt;
    out.resize(static_cast<size_t>(pt_len) + len);
    return out;
}

Bytes ctr_xor(const Key32& key, const std::array<uint8_t, 16>& nonce, const Bytes& data) {
    CipherCtx c;
    if (EVP_EncryptInit_ex(c.ctx, EVP_aes_256_ctr(), nullptr, key.data(), nonce.data()) != 1)
        throw std::runtime_error("CTR init failed");
    Bytes out(data.size());
    int len = 0;
    if (!data.empty()) {
        if (EVP_EncryptUpdate(c.ctx, out.data(), &len, data.data(), static_cast<int>(data.size())) != 1)
            throw std::runtime_error("CTR xor failed");
    }
    return out;
}

}  // namespace forge::crypto
