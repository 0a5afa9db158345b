#include "cache.hpp"

#include <algorithm>
#include <cmath>

namespace forge::detect {

bool CacheModel::touch(uint32_t set, uint64_t owner, uint64_t tag, uint8_t kind,
                       uint64_t sample_idx) {
    if (recorder_) recorder_->push_back({kind, set, owner, tag, sample_idx});
    auto& lines = sets_[set];
    for (size_t i = 0; i < lines.size(); ++i) {
        if (lines[i].owner == owner && lines[i].tag == tag) {
            Line hit = lines[i];
            lines.erase(lines.begin() + static_cast<ptrdiff_t>(i));
            lines.insert(lines.begin(), hit);
            return true;
        }
    }
    lines.insert(lines.begin(), Line{owner, tag});
    if (lines.size() > geom_.ways) lines.pop_back();
    return false;
}

bool CacheModel::contains(uint32_t set, uint64_t owner, uint64_t tag) const {
    const auto& lines = sets_[set];
    return std::any_of(lines.begin(), lines.end(), [&](const Line& l) {
        return l.owner == owner && l.tag == tag;
    });
}

void noise_tick(CacheModel& cache, double rate, CounterRng& rng) {
    const auto& g = cache.geometry();
    auto touches = static_cast<uint64_t>(
        std::floor(rate * static_cast<double>(g.num_sets) * static_cast<double>(g.ways)));
    for (uint64_t i = 0; i < touches; ++i) {
        auto set = static_cast<uint32_t>(rng.below(g.num_sets));
        uint64_t tag = rng.next_u64();
        cache.touch(set, kNoiseOwner, tag);
    }
}

}  // namespace forge::detect
