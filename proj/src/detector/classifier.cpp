#include "classifier.hpp"

#include <algorithm>
#include <sstream>

namespace forge::detect {

Result<std::vector<WindowDecision>> classify(const std::vector<TraceSample>& trace,
                                             const ThresholdClassifier& clf) {
    if (clf.window == 0 || trace.size() < clf.window) return Err::InsufficientTrace;
    std::vector<WindowDecision> out;
    out.reserve(trace.size() / clf.window);
    for (size_t start = 0; start + clf.window <= trace.size(); start += clf.window) {
        uint64_t misses = 0;
        for (size_t i = start; i < start + clf.window; ++i) misses += trace[i].misses;
        out.push_back(misses >= clf.threshold ? WindowDecision::CloneDetected
                                              : WindowDecision::Alone);
    }
    return out;
}

Result<EvalMetrics> evaluate(const std::vector<LabeledRun>& runs) {
    EvalMetrics m;
    bool any_pos = false, any_neg = false;
    for (const auto& r : runs) {
        (r.clone_present ? any_pos : any_neg) = true;
        if (r.clone_present && r.flagged) ++m.tp;
        if (!r.clone_present && r.flagged) ++m.fp;
        if (r.clone_present && !r.flagged) ++m.fn;
        if (!r.clone_present && !r.flagged) ++m.tn;
    }
    if (!any_pos || !any_neg) return Err::DegenerateLabels;
    m.precision = (m.tp + m.fp) ? static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fp) : 0.0;
    m.recall = (m.tp + m.fn) ? static_cast<double>(m.tp) / static_cast<double>(m.tp + m.fn) : 0.0;
    m.f1 = (m.precision + m.recall > 0.0)
               ? 2.0 * m.precision * m.recall / (m.precision + m.recall)
               : 0.0;
    return m;
}

CorpusRun reduce_run(bool clone_present, const std::vector<TraceSample>& trace, uint32_t window) {
    CorpusRun run;
    run.clone_present = clone_present;
    for (size_t start = 0; window > 0 && start + window <= trace.size(); start += window) {
        uint64_t misses = 0;
        for (size_t i = start; i < start + window; ++i) misses += trace[i].misses;
        run.window_misses.push_back(misses);
    }
    return run;
}

std::vector<SweepRow> sweep_thresholds(const std::vector<CorpusRun>& corpus,
                                       uint64_t max_threshold) {
    std::vector<SweepRow> rows;
    rows.reserve(max_threshold + 1);
    for (uint64_t t = 0; t <= max_threshold; ++t) {
        std::vector<LabeledRun> labeled;
        labeled.reserve(corpus.size());
        for (const auto& run : corpus) {
            bool flagged = std::any_of(run.window_misses.begin(), run.window_misses.end(),
                                       [&](uint64_t m) { return m >= t; });
            labeled.push_back({run.clone_present, flagged});
        }
        auto metrics = evaluate(labeled);
        if (metrics.ok()) rows.push_back({t, metrics.value()});
    }
    return rows;
}

SweepRow best_row(const std::vector<SweepRow>& rows) {
    SweepRow best{0, {}};
    best.metrics.f1 = -1.0;
    for (const auto& r : rows)
        if (r.metrics.f1 > best.metrics.f1) best = r;
    return best;
}

namespace {

std::string render_trace(const std::vector<TraceSample>& trace,
                         const std::vector<WindowDecision>* decisions, uint32_t window) {
    std::ostringstream os;
    for (size_t i = 0; i < trace.size(); ++i) {
        os << trace[i].step << '\t' << trace[i].hits << '\t' << trace[i].misses;
        if (decisions) {
            size_t w = window ? i / window : 0;
            if (w < decisions->size())
                os << '\t'
                   << ((*decisions)[w] == WindowDecision::CloneDetected ? "clone" : "alone");
            else
                os << "\t-";
        }
        os << '\n';
    }
    return os.str();
}

}  // namespace

std::string export_trace(const std::vector<TraceSample>& trace) {
    return render_trace(trace, nullptr, 0);
}

std::string export_trace(const std::vector<TraceSample>& trace, const ThresholdClassifier& clf) {
    auto decisions = classify(trace, clf);
    if (!decisions.ok()) return render_trace(trace, nullptr, 0);
    return render_trace(trace, &decisions.value(), clf.window);
}

}  // namespace forge::detect
