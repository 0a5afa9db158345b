#pragma once

#include <cstdint>
#include <vector>

#include "../result.hpp"
#include "../rng.hpp"

namespace forge::detect {

struct CacheGeometry {
    uint32_t num_sets = 1024;  // power of two
    uint32_t ways = 16;
};

// Owner id for the background noise process. Instances use their ordinal.
constexpr uint64_t kNoiseOwner = ~0ULL;

// Everything that touches the cache goes through here, so a run can be
// replayed against an independent oracle. kind 1 marks probe accesses that
// contribute to a trace sample.
struct CacheOp {
    uint8_t kind;  // 0 = plain touch, 1 = probe line
    uint32_t set;
    uint64_t owner;
    uint64_t tag;
    uint64_t sample_idx;  // per-owner probe ordinal, kind 1 only
};

// Set-associative LRU cache. A line is identified by (owner, tag); hit/miss
// is exact membership, the simulation's stand-in for access timing.
class CacheModel {
public:
    explicit CacheModel(CacheGeometry g) : geom_(g), sets_(g.num_sets) {}

    const CacheGeometry& geometry() const { return geom_; }

    // Access one line: refresh on hit, insert (evicting LRU) on miss.
    // Returns true on hit. Probe accesses pass kind 1 plus their sample
    // ordinal so the recorded run carries sample boundaries.
    bool touch(uint32_t set, uint64_t owner, uint64_t tag, uint8_t kind = 0,
               uint64_t sample_idx = 0);

    bool contains(uint32_t set, uint64_t owner, uint64_t tag) const;

    void set_recorder(std::vector<CacheOp>* rec) { recorder_ = rec; }
    std::vector<CacheOp>* recorder() const { return recorder_; }

private:
    struct Line {
        uint64_t owner;
        uint64_t tag;
    };

    CacheGeometry geom_;
    std::vector<std::vector<Line>> sets_;  // MRU at front
    std::vector<CacheOp>* recorder_ = nullptr;
};

// Background load: touches floor(rate * S * W) uniformly random lines per
// scheduler tick under the noise owner.
void noise_tick(CacheModel& cache, double rate, CounterRng& rng);

}  // namespace forge::detect
