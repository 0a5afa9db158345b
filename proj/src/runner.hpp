#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "result.hpp"

namespace forge::runner {

struct RunOptions {
    std::string scenario;
    std::string variant = "benign";
    uint64_t seed = 1;
    uint32_t clones = 2;
    uint32_t clients = 2;
    double noise = 0.0;
    std::string mitigation = "registry";
    bool sweep = false;
};

struct RunArtifacts {
    nlohmann::ordered_json report;
    std::string events;                    // empty for sweeps
    std::vector<std::string> traces;       // rendered per detector instance
    std::vector<std::string> trace_files;  // matching file names
    std::string table;                     // sweep rows, empty otherwise
    bool violated = false;
    bool detected = false;
};

const std::vector<std::string>& catalog();
std::string catalog_text();

// NotFound: unknown scenario. ConfigError: bad variant/mitigation/values or
// an empty sweep grid.
Result<RunArtifacts> execute(const RunOptions& opts);

}  // namespace forge::runner
