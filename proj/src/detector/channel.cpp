#include "channel.hpp"

#include <algorithm>

namespace forge::detect {

Result<Channel> derive_channel(const EnclaveIdentity& identity, const CacheGeometry& geom,
                               uint32_t k) {
    if (geom.num_sets == 0 || (geom.num_sets & (geom.num_sets - 1)) != 0)
        return Err::GeometryError;
    if (geom.ways == 0 || k == 0 || k > geom.num_sets) return Err::GeometryError;

    Channel ch;
    ch.set_indices.reserve(k);
    crypto::Digest32 block = identity.mrenclave;
    size_t offset = 0;
    while (ch.set_indices.size() < k) {
        if (offset + 2 > block.size()) {
            block = crypto::sha256(block.data(), block.size());
            offset = 0;
        }
        uint32_t v = (static_cast<uint32_t>(block[offset]) << 8) | block[offset + 1];
        offset += 2;
        uint32_t idx = v % geom.num_sets;
        if (std::find(ch.set_indices.begin(), ch.set_indices.end(), idx) ==
            ch.set_indices.end()) {
            ch.set_indices.push_back(idx);
        }
    }
    return ch;
}

void build_eviction_sets(Channel& ch, const CacheGeometry& geom) {
    ch.eviction_tags.assign(ch.set_indices.size(), {});
    for (size_t s = 0; s < ch.set_indices.size(); ++s) {
        auto& tags = ch.eviction_tags[s];
        tags.reserve(geom.ways);
        for (uint32_t w = 0; w < geom.ways; ++w)
            tags.push_back((static_cast<uint64_t>(ch.set_indices[s]) << 16) | w);
    }
}

void Monitor::prime(CacheModel& cache) const {
    for (size_t s = 0; s < channel_.set_indices.size(); ++s)
        for (uint64_t tag : channel_.eviction_tags[s])
            cache.touch(channel_.set_indices[s], owner_, tag);
}

TraceSample Monitor::probe(CacheModel& cache, uint64_t step) {
    TraceSample sample;
    sample.step = step;
    uint64_t idx = samples_taken_++;
    for (size_t s = 0; s < channel_.set_indices.size(); ++s) {
        for (uint64_t tag : channel_.eviction_tags[s]) {
            bool hit = cache.touch(channel_.set_indices[s], owner_, tag, 1, idx);
            if (hit)
                ++sample.hits;
            else
                ++sample.misses;
        }
    }
    trace_.push_back(sample);
    return sample;
}

}  // namespace forge::detect
