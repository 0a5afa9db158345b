#include "runner.hpp"

#include <algorithm>
#include <cstdio>

#include "report.hpp"

namespace forge::runner {

using attacks::Category;
using attacks::Mitigation;
using attacks::ScenarioConfig;
using nlohmann::ordered_json;

namespace {

struct ScenarioInfo {
    const char* name;
    Category category;
    const char* app;
};

constexpr ScenarioInfo kScenarios[] = {
    {"fim-aria", Category::FIm, "aria"},
    {"forkvs-bisgx", Category::ForKVS, "bisgx"},
    {"forkvs-pkvs", Category::ForKVS, "pkvs"},
    {"bug-proxy", Category::BUG, "proxy"},
    {"bug-shuffler", Category::BUG, "shuffler"},
    {"detector-bench", Category::Detector, "idle"},
};

const ScenarioInfo* find_scenario(const std::string& name) {
    for (const auto& s : kScenarios)
        if (name == s.name) return &s;
    return nullptr;
}

std::string fmt(const char* spec, double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

Result<ScenarioConfig> make_config(const RunOptions& opts, const ScenarioInfo& info) {
    if (opts.clients < 1 || opts.clones < 1) return Err::ConfigError;
    if (opts.noise < 0.0 || opts.noise > 1.0) return Err::ConfigError;

    ScenarioConfig cfg;
    cfg.seed = opts.seed;
    cfg.category = info.category;
    cfg.app = info.app;
    cfg.clients = opts.clients;
    cfg.noise = opts.noise;

    if (opts.variant == "benign") {
        cfg.clones = 1;
        cfg.mitigation = Mitigation::None;
    } else if (opts.variant == "attack") {
        cfg.clones = opts.clones;
        cfg.mitigation = Mitigation::None;
    } else if (opts.variant == "mitigated") {
        cfg.clones = opts.clones;
        if (opts.mitigation == "registry")
            cfg.mitigation = Mitigation::TrustedRegistry;
        else if (opts.mitigation == "detector")
            cfg.mitigation = Mitigation::CloneDetector;
        else
            return Err::ConfigError;
    } else {
        return Err::ConfigError;
    }
    return cfg;
}

Result<RunArtifacts> run_single(const RunOptions& opts, const ScenarioInfo& info) {
    auto cfg = make_config(opts, info);
    if (!cfg.ok()) return cfg.error();
    auto verdict = attacks::run_scenario(cfg.value());
    if (!verdict.ok()) return verdict.error();
    const attacks::Verdict& v = verdict.value();

    RunArtifacts out;
    out.violated = v.violated;
    out.detected = v.detected;
    out.events = v.log_text;
    if (v.detector_ran) {
        detect::ThresholdClassifier clf{v.window, v.threshold};
        for (size_t i = 0; i < v.traces.size(); ++i) {
            out.traces.push_back(detect::export_trace(v.traces[i].samples, clf));
            out.trace_files.push_back(i == 0 ? "trace.tsv"
                                             : "trace." + std::to_string(i) + ".tsv");
        }
    }
    ScenarioConfig echo = cfg.value();
    echo.threshold = v.threshold;
    echo.window = v.window ? v.window : echo.window;
    out.report = report::build_report(info.name, opts.variant, echo, v, out.trace_files);
    return out;
}

Result<RunArtifacts> sweep_detector(const RunOptions& opts, const ScenarioInfo& info) {
    auto base = make_config(opts, info);
    if (!base.ok()) return base.error();
    ScenarioConfig cfg = base.value();

    std::vector<double> rates =
        opts.noise > 0.0 ? std::vector<double>{opts.noise}
                         : std::vector<double>{0.0, 0.05, 0.2};
    uint64_t max_misses =
        static_cast<uint64_t>(cfg.window) * cfg.channel_sets * cfg.geometry.ways;
    uint64_t step = max_misses / 10;
    std::vector<uint64_t> thresholds;
    for (uint64_t t = 0; t <= max_misses; t += step) thresholds.push_back(t);
    if (rates.empty() || thresholds.empty()) return Err::ConfigError;

    constexpr int kRunsPerLabel = 10;
    RunArtifacts out;
    out.table = "noise\tthreshold\ttp\tfp\tfn\ttn\tprecision\trecall\tf1\n";
    ordered_json rows = ordered_json::array();

    for (double r : rates) {
        std::vector<detect::CorpusRun> corpus;
        for (int i = 0; i < kRunsPerLabel; ++i) {
            for (int clone_present = 0; clone_present <= 1; ++clone_present) {
                ScenarioConfig c = cfg;
                c.seed = opts.seed + 2ULL * static_cast<uint64_t>(i) +
                         static_cast<uint64_t>(clone_present);
                c.clones = clone_present ? 2 : 1;
                c.noise = r;
                auto v = attacks::run_scenario(c);
                if (!v.ok()) return v.error();
                if (v.value().traces.empty()) return Err::ConfigError;
                corpus.push_back(detect::reduce_run(clone_present != 0,
                                                    v.value().traces[0].samples, cfg.window));
            }
        }
        for (uint64_t t : thresholds) {
            std::vector<detect::LabeledRun> labeled;
            labeled.reserve(corpus.size());
            for (const auto& run : corpus) {
                bool flagged = false;
                for (uint64_t m : run.window_misses) flagged |= (m >= t);
                labeled.push_back({run.clone_present, flagged});
            }
            auto m = detect::evaluate(labeled);
            if (!m.ok()) return m.error();
            const auto& em = m.value();
            out.table += fmt("%.2f", r) + "\t" + std::to_string(t) + "\t" +
                         std::to_string(em.tp) + "\t" + std::to_string(em.fp) + "\t" +
                         std::to_string(em.fn) + "\t" + std::to_string(em.tn) + "\t" +
                         fmt("%.4f", em.precision) + "\t" + fmt("%.4f", em.recall) + "\t" +
                         fmt("%.4f", em.f1) + "\n";
            rows.push_back({{"noise", r},
                            {"threshold", t},
                            {"tp", em.tp},
                            {"fp", em.fp},
                            {"fn", em.fn},
                            {"tn", em.tn},
                            {"precision", em.precision},
                            {"recall", em.recall},
                            {"f1", em.f1}});
        }
    }

    out.report["scenario"] = info.name;
    out.report["variant"] = opts.variant;
    out.report["config"] = report::config_json(cfg);
    out.report["sweep"] = {{"kind", "noise-threshold"},
                           {"runs_per_label", kRunsPerLabel},
                           {"rows", rows}};
    out.report["files"] = {{"report", "report.json"}, {"table", "table.tsv"}};
    return out;
}

Result<RunArtifacts> sweep_clones(const RunOptions& opts, const ScenarioInfo& info) {
    auto base = make_config(opts, info);
    if (!base.ok()) return base.error();

    std::vector<uint32_t> grid{1, 2, 4};
    RunArtifacts out;
    out.table = "clones\tviolated\tdetected\tmin_anonymity\tmax_anonymity\n";
    ordered_json rows = ordered_json::array();

    for (uint32_t g : grid) {
        ScenarioConfig c = base.value();
        c.clones = g;
        auto v = attacks::run_scenario(c);
        if (!v.ok()) return v.error();
        const attacks::Verdict& verdict = v.value();
        size_t min_set = 0, max_set = 0;
        for (const auto& [client, set] : verdict.anonymity_sets) {
            if (min_set == 0 || set.size() < min_set) min_set = set.size();
            max_set = std::max(max_set, set.size());
        }
        out.table += std::to_string(g) + "\t" + (verdict.violated ? "true" : "false") + "\t" +
                     (verdict.detected ? "true" : "false") + "\t" + std::to_string(min_set) +
                     "\t" + std::to_string(max_set) + "\n";
        rows.push_back({{"clones", g},
                        {"violated", verdict.violated},
                        {"detected", verdict.detected},
                        {"min_anonymity", min_set},
                        {"max_anonymity", max_set}});
    }
    if (rows.empty()) return Err::ConfigError;

    out.report["scenario"] = info.name;
    out.report["variant"] = opts.variant;
    out.report["config"] = report::config_json(base.value());
    out.report["sweep"] = {{"kind", "clones"}, {"rows", rows}};
    out.report["files"] = {{"report", "report.json"}, {"table", "table.tsv"}};
    return out;
}

}  // namespace

const std::vector<std::string>& catalog() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& s : kScenarios) v.emplace_back(s.name);
        return v;
    }();
    return names;
}

std::string catalog_text() {
    std::string out;
    for (const auto& s : kScenarios) {
        out += s.name;
        out += ": benign attack mitigated\n";
    }
    return out;
}

Result<RunArtifacts> execute(const RunOptions& opts) {
    const ScenarioInfo* info = find_scenario(opts.scenario);
    if (!info) return Err::NotFound;
    if (opts.sweep) {
        if (info->category == Category::Detector) return sweep_detector(opts, *info);
        return sweep_clones(opts, *info);
    }
    return run_single(opts, *info);
}

}  // namespace forge::runner
