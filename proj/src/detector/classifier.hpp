#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "../result.hpp"
#include "cache.hpp"
#include "channel.hpp"

namespace forge::detect {

struct ThresholdClassifier {
    uint32_t window = 10;     // samples per window
    uint64_t threshold = 0;   // flag when window miss total >= threshold
};

// Shipped default: well inside the gap between solo-with-noise windows and
// the all-evicted windows a clone produces.
inline uint64_t default_threshold(const CacheGeometry& geom, uint32_t channel_sets,
                                  uint32_t window) {
    uint64_t full = static_cast<uint64_t>(window) * channel_sets * geom.ways;
    return full * 3 / 5;
}

enum class WindowDecision : uint8_t { Alone = 0, CloneDetected = 1 };

// Non-overlapping windows of N samples; trailing partial window is dropped.
Result<std::vector<WindowDecision>> classify(const std::vector<TraceSample>& trace,
                                             const ThresholdClassifier& clf);

inline bool any_flagged(const std::vector<WindowDecision>& ds) {
    for (auto d : ds)
        if (d == WindowDecision::CloneDetected) return true;
    return false;
}

struct EvalMetrics {
    uint64_t tp = 0, fp = 0, fn = 0, tn = 0;
    double precision = 0.0, recall = 0.0, f1 = 0.0;
};

struct LabeledRun {
    bool clone_present;  // ground truth
    bool flagged;        // classifier output: any window flagged
};

Result<EvalMetrics> evaluate(const std::vector<LabeledRun>& runs);

// A labeled trace reduced to its per-window miss totals, ready for sweeping.
struct CorpusRun {
    bool clone_present;
    std::vector<uint64_t> window_misses;
};

CorpusRun reduce_run(bool clone_present, const std::vector<TraceSample>& trace, uint32_t window);

struct SweepRow {
    uint64_t threshold;
    EvalMetrics metrics;
};

// Exhaustive sweep over T = 0..max_threshold inclusive.
std::vector<SweepRow> sweep_thresholds(const std::vector<CorpusRun>& corpus,
                                       uint64_t max_threshold);
SweepRow best_row(const std::vector<SweepRow>& rows);

// Delimited trace export: step, hits, misses, one record per sample; window
// decisions appended as a fourth column when a classifier is supplied
// ("-" for samples whose window never completed).
std::string export_trace(const std::vector<TraceSample>& trace);
std::string export_trace(const std::vector<TraceSample>& trace, const ThresholdClassifier& clf);

}  // namespace forge::detect
