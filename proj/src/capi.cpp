#include <enclaveforge/enclaveforge.h>

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "runner.hpp"

struct ef_report {
    std::string json;
    std::string events;
    std::string table;
    std::vector<std::string> traces;
    std::vector<std::string> trace_names;
    bool violated = false;
    bool detected = false;
};

namespace {

thread_local std::string g_last_error;

ef_status fail(ef_status st, const std::string& msg) {
    g_last_error = msg;
    return st;
}

ef_status map_err(forge::Err e) {
    switch (e) {
        case forge::Err::NotFound:
            return EF_ERR_UNKNOWN_SCENARIO;
        case forge::Err::ConfigError:
            return EF_ERR_BAD_ARGS;
        default:
            return EF_ERR_INTERNAL;
    }
}

bool write_file(const std::filesystem::path& path, const std::string& body) {
    std::ofstream out(path, std::ios::binary);
    out << body;
    return static_cast<bool>(out);
}

}  // namespace

extern "C" {

void ef_options_init(ef_options* opts) {
    if (!opts) return;
    *opts = ef_options{};
    opts->variant = "benign";
    opts->seed = 1;
    opts->clones = 2;
    opts->clients = 2;
    opts->noise = 0.0;
    opts->mitigation = "registry";
}

ef_status ef_run(const ef_options* opts, ef_report** out) {
    if (out) *out = nullptr;
    if (!opts || !out) return fail(EF_ERR_BAD_ARGS, "null options or output pointer");
    if (!opts->scenario || !*opts->scenario) return fail(EF_ERR_BAD_ARGS, "scenario is required");

    forge::runner::RunOptions ro;
    ro.scenario = opts->scenario;
    ro.variant = opts->variant ? opts->variant : "benign";
    ro.seed = opts->seed;
    ro.clones = opts->clones;
    ro.clients = opts->clients;
    ro.noise = opts->noise;
    ro.mitigation = opts->mitigation ? opts->mitigation : "registry";
    ro.sweep = opts->sweep != 0;

    try {
        auto res = forge::runner::execute(ro);
        if (!res.ok())
            return fail(map_err(res.error()),
                        std::string("run failed: ") + forge::err_name(res.error()));
        auto rep = new ef_report;
        rep->json = res.value().report.dump(2) + "\n";
        rep->events = res.value().events;
        rep->table = res.value().table;
        rep->traces = res.value().traces;
        rep->trace_names = res.value().trace_files;
        rep->violated = res.value().violated;
        rep->detected = res.value().detected;
        *out = rep;
        g_last_error.clear();
        return EF_OK;
    } catch (const std::exception& e) {
        return fail(EF_ERR_INTERNAL, e.what());
    }
}

int ef_report_violated(const ef_report* rep) { return rep && rep->violated ? 1 : 0; }

int ef_report_detected(const ef_report* rep) { return rep && rep->detected ? 1 : 0; }

const char* ef_report_json(const ef_report* rep) { return rep ? rep->json.c_str() : ""; }

const char* ef_report_events(const ef_report* rep) { return rep ? rep->events.c_str() : ""; }

const char* ef_report_table(const ef_report* rep) { return rep ? rep->table.c_str() : ""; }

size_t ef_report_trace_count(const ef_report* rep) { return rep ? rep->traces.size() : 0; }

const char* ef_report_trace(const ef_report* rep, size_t idx) {
    if (!rep || idx >= rep->traces.size()) return "";
    return rep->traces[idx].c_str();
}

const char* ef_report_trace_name(const ef_report* rep, size_t idx) {
    if (!rep || idx >= rep->trace_names.size()) return "";
    return rep->trace_names[idx].c_str();
}

ef_status ef_report_write(const ef_report* rep, const char* dir) {
    if (!rep || !dir || !*dir) return fail(EF_ERR_BAD_ARGS, "null report or directory");
    try {
        std::filesystem::path base(dir);
        std::filesystem::create_directories(base);
        if (!write_file(base / "report.json", rep->json))
            return fail(EF_ERR_IO, "cannot write report.json");
        if (!rep->events.empty() && !write_file(base / "events.log", rep->events))
            return fail(EF_ERR_IO, "cannot write events.log");
        if (!rep->table.empty() && !write_file(base / "table.tsv", rep->table))
            return fail(EF_ERR_IO, "cannot write table.tsv");
        for (size_t i = 0; i < rep->traces.size(); ++i)
            if (!write_file(base / rep->trace_names[i], rep->traces[i]))
                return fail(EF_ERR_IO, "cannot write " + rep->trace_names[i]);
        g_last_error.clear();
        return EF_OK;
    } catch (const std::exception& e) {
        return fail(EF_ERR_IO, e.what());
    }
}

void ef_report_free(ef_report* rep) { delete rep; }

size_t ef_catalog_count(void) { return forge::runner::catalog().size(); }

const char* ef_catalog_scenario(size_t idx) {
    const auto& names = forge::runner::catalog();
    if (idx >= names.size()) return nullptr;
    return names[idx].c_str();
}

const char* ef_catalog_text(void) {
    static const std::string text = forge::runner::catalog_text();
    return text.c_str();
}

const char* ef_version(void) { return "0.1.0"; }

const char* ef_last_error(void) { return g_last_error.c_str(); }

}  // extern "C"
