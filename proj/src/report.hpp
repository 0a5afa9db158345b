#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "attacks/verdict.hpp"

namespace forge::report {

nlohmann::ordered_json config_json(const attacks::ScenarioConfig& cfg);
nlohmann::ordered_json verdict_json(const attacks::Verdict& v);

// Single-run report: config echo, verdict, deterministic metrics, and the
// names of the sibling files a writer should place next to it.
nlohmann::ordered_json build_report(const std::string& scenario, const std::string& variant,
                                    const attacks::ScenarioConfig& cfg,
                                    const attacks::Verdict& v,
                                    const std::vector<std::string>& trace_files);

}  // namespace forge::report
