#include "report.hpp"

namespace forge::report {

using nlohmann::ordered_json;

ordered_json config_json(const attacks::ScenarioConfig& cfg) {
    ordered_json j;
    j["seed"] = cfg.seed;
    j["category"] = attacks::category_name(cfg.category);
    j["app"] = cfg.app;
    j["clones"] = cfg.clones;
    j["clients"] = cfg.clients;
    j["mitigation"] = attacks::mitigation_name(cfg.mitigation);
    j["noise"] = cfg.noise;
    j["mc_base"] = cfg.mc_base;
    j["inject_pause"] = cfg.inject_pause;
    j["cache"] = {{"sets", cfg.geometry.num_sets},
                  {"ways", cfg.geometry.ways},
                  {"channel_sets", cfg.channel_sets}};
    j["window"] = cfg.window;
    j["threshold"] = cfg.threshold;
    return j;
}

ordered_json verdict_json(const attacks::Verdict& v) {
    ordered_json j;
    j["violated"] = v.violated;
    j["detector_ran"] = v.detector_ran;
    j["detected"] = v.detected;
    j["launched"] = v.launched;
    j["rejected_launches"] = v.rejected_launches;

    ordered_json ev;
    ev["stale_reads"] = ordered_json::array();
    for (const auto& s : v.evidence.stale_reads)
        ev["stale_reads"].push_back({{"client", s.client},
                                     {"key", s.key},
                                     {"got", s.got},
                                     {"latest", s.latest},
                                     {"read_seq", s.read_seq},
                                     {"write_seq", s.write_seq}});
    ev["duplicate_indices"] = ordered_json::array();
    for (const auto& d : v.evidence.duplicate_indices)
        ev["duplicate_indices"].push_back({{"index", d.index}, {"blobs", d.blobs}});
    ev["recovered_mapping"] = ordered_json::object();
    for (const auto& [client, request] : v.evidence.recovered_mapping)
        ev["recovered_mapping"][std::to_string(client)] = request;
    j["evidence"] = std::move(ev);

    ordered_json sets = ordered_json::object();
    for (const auto& [client, candidates] : v.anonymity_sets)
        sets[std::to_string(client)] = candidates;
    j["anonymity_sets"] = std::move(sets);
    return j;
}

ordered_json build_report(const std::string& scenario, const std::string& variant,
                          const attacks::ScenarioConfig& cfg, const attacks::Verdict& v,
                          const std::vector<std::string>& trace_files) {
    ordered_json j;
    j["scenario"] = scenario;
    j["variant"] = variant;
    j["config"] = config_json(cfg);
    j["verdict"] = verdict_json(v);

    ordered_json metrics;
    metrics["sim_steps"] = v.sim_steps;
    metrics["events"] = v.events.size();
    if (v.detector_ran) {
        metrics["window"] = v.window;
        metrics["threshold"] = v.threshold;
        metrics["traces"] = ordered_json::array();
        for (const auto& t : v.traces) {
            uint64_t flagged = 0;
            for (auto d : t.decisions)
                if (d == detect::WindowDecision::CloneDetected) ++flagged;
            metrics["traces"].push_back({{"instance", t.instance},
                                         {"samples", t.samples.size()},
                                         {"windows", t.decisions.size()},
                                         {"flagged_windows", flagged}});
        }
    }
    j["metrics"] = std::move(metrics);

    ordered_json files;
    files["report"] = "report.json";
    files["events"] = "events.log";
    files["traces"] = trace_files;
    j["files"] = std::move(files);
    return j;
}

}  // namespace forge::report
