#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "../detector/cache.hpp"
#include "../detector/classifier.hpp"
#include "../event_log.hpp"
#include "../result.hpp"

namespace forge::attacks {

enum class Category { FIm, ForKVS, BUG, Detector };
enum class Mitigation { None, TrustedRegistry, CloneDetector };

const char* category_name(Category c);
const char* mitigation_name(Mitigation m);

struct ScenarioConfig {
    uint64_t seed = 1;
    Category category = Category::FIm;
    std::string app = "aria";
    uint32_t clones = 2;
    uint32_t clients = 2;
    Mitigation mitigation = Mitigation::None;
    double noise = 0.0;
    uint64_t mc_base = 0;
    bool inject_pause = true;
    // Per-client launched-instance ordinal; round-robin when empty.
    std::vector<uint32_t> routing_override;
    detect::CacheGeometry geometry;
    uint32_t channel_sets = 16;
    uint32_t window = 10;
    uint64_t threshold = 0;       // 0 -> default for the geometry
    uint64_t detector_ticks = 0;  // extra ticks after the script; 0 -> 2*window
};

struct StaleRead {
    uint32_t client = 0;
    std::string key;
    std::string got;
    std::string latest;
    uint64_t read_seq = 0;
    uint64_t write_seq = 0;

    bool operator==(const StaleRead&) const = default;
};

struct DuplicateIndex {
    uint64_t index = 0;
    std::vector<std::string> blobs;

    bool operator==(const DuplicateIndex&) const = default;
};

struct Evidence {
    std::vector<StaleRead> stale_reads;
    std::vector<DuplicateIndex> duplicate_indices;
    std::map<uint32_t, std::string> recovered_mapping;

    bool operator==(const Evidence&) const = default;
};

struct InstanceTrace {
    uint32_t instance = 0;
    std::vector<detect::TraceSample> samples;
    std::vector<detect::WindowDecision> decisions;
};

struct Verdict {
    Category category = Category::FIm;
    std::string app;
    bool violated = false;
    bool detector_ran = false;
    bool detected = false;
    Evidence evidence;
    std::map<uint32_t, std::vector<uint32_t>> anonymity_sets;
    uint32_t launched = 0;
    uint32_t rejected_launches = 0;
    uint64_t sim_steps = 0;
    uint64_t threshold = 0;
    uint32_t window = 0;
    std::vector<Event> events;
    std::string log_text;
    std::vector<InstanceTrace> traces;
};

Result<Verdict> run_scenario(const ScenarioConfig& cfg);
Result<Verdict> run_mitigated(const ScenarioConfig& cfg);

// Verdict reconstruction from the event log alone. The adversary-visible
// parts (anonymity sets, recovered mappings) use only traffic metadata and
// plaintext egress events, never session payloads.
Evidence derive_evidence(Category cat, const std::string& app, const std::vector<Event>& events);
std::map<uint32_t, std::vector<uint32_t>> derive_anonymity_sets(const std::string& app,
                                                                const std::vector<Event>& events);
bool derive_violated(Category cat, const std::string& app, const std::vector<Event>& events);

// True when re-deriving evidence and verdict from v.events reproduces v.
bool revalidate(const Verdict& v);

}  // namespace forge::attacks
