#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace forge {

using Bytes = std::vector<uint8_t>;

inline Bytes to_bytes(std::string_view s) {
    return Bytes(s.begin(), s.end());
}

inline std::string to_string(const Bytes& b) {
    return std::string(b.begin(), b.end());
}

inline std::string to_hex(const uint8_t* data, size_t len) {
    static const char* digits = "0123456789abcdef";
    std::string out;
    out.reserve(len * 2);
    for (size_t i = 0; i < len; ++i) {
        out.push_back(digits[data[i] >> 4]);
        out.push_back(digits[data[i] & 0xf]);
    }
    return out;
}

inline std::string to_hex(const Bytes& b) {
    return to_hex(b.data(), b.size());
}

inline void append_u64_le(Bytes& out, uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<uint8_t>(v >> (8 * i)));
}

inline uint64_t read_u64_le(const uint8_t* p) {
    uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<uint64_t>(p[i]) << (8 * i);
    return v;
}

inline void append_bytes(Bytes& out, const Bytes& b) {
    append_u64_le(out, b.size());
    out.insert(out.end(), b.begin(), b.end());
}

// Log-friendly rendering: ASCII payloads as-is, anything else as hex.
inline std::string printable(const Bytes& b) {
    for (uint8_t c : b)
        if (c < 0x20 || c > 0x7e) return "0x" + to_hex(b);
    return to_string(b);
}

}  // namespace forge
