#pragma once

#include <cstdint>
#include <string_view>

#include "bytes.hpp"

namespace forge {

// Counter-based generator: output i is a pure function of (key, i), so every
// draw is reproducible from the scenario seed regardless of call order in
// unrelated subsystems. Substreams are forked by label.
class CounterRng {
public:
    explicit CounterRng(uint64_t key) : key_(key) {}

    uint64_t next_u64() {
        uint64_t z = key_ + 0x9e3779b97f4a7c15ULL * ++counter_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, n). Modulo bias is irrelevant at simulation scale.
    uint64_t below(uint64_t n) { return n == 0 ? 0 : next_u64() % n; }

    double unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    Bytes bytes(size_t n) {
        Bytes out;
        out.reserve(n);
        while (out.size() < n) {
            uint64_t v = next_u64();
            for (int i = 0; i < 8 && out.size() < n; ++i)
                out.push_back(static_cast<uint8_t>(v >> (8 * i)));
        }
        return out;
    }

    CounterRng fork(std::string_view label) const {
        uint64_t h = key_ ^ 0x51afd7ed558ccd89ULL;
        for (char ch : label) {
            h ^= static_cast<uint8_t>(ch);
            h *= 0x00000100000001b3ULL;
        }
        return CounterRng(h);
    }

private:
    uint64_t key_;
    uint64_t counter_ = 0;
};

}  // namespace forge
