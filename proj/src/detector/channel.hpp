#pragma once

#include <cstdint>
#include <vector>

#include "../platform.hpp"
#include "../result.hpp"
#include "cache.hpp"

namespace forge::detect {

// The covert channel: k cache sets derived from MRENCLAVE, so clones land on
// the same sets and different binaries (almost surely) do not.
struct Channel {
    std::vector<uint32_t> set_indices;
    std::vector<std::vector<uint64_t>> eviction_tags;  // [set][way], monitor-owned
};

struct TraceSample {
    uint64_t step = 0;
    uint32_t hits = 0;
    uint32_t misses = 0;
};

// k distinct set indices from successive 16-bit digest blocks of mrenclave
// modulo S, skipping duplicates; the digest is re-hashed when blocks run out.
Result<Channel> derive_channel(const EnclaveIdentity& identity, const CacheGeometry& geom,
                               uint32_t k);

// W monitor-owned line tags per channel set; touching all W fills the set.
void build_eviction_sets(Channel& ch, const CacheGeometry& geom);

// One monitor instance. prime() fills the channel sets with its own lines;
// probe() reports per line cached/evicted, re-inserting as it goes.
class Monitor {
public:
    Monitor(Channel ch, uint64_t owner) : channel_(std::move(ch)), owner_(owner) {}

    const Channel& channel() const { return channel_; }
    uint64_t owner() const { return owner_; }

    void prime(CacheModel& cache) const;
    TraceSample probe(CacheModel& cache, uint64_t step);

    const std::vector<TraceSample>& trace() const { return trace_; }

private:
    Channel channel_;
    uint64_t owner_;
    uint64_t samples_taken_ = 0;
    std::vector<TraceSample> trace_;
};

}  // namespace forge::detect
