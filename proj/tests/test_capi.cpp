#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <doctest.h>
#include <json.hpp>

#include "enclaveforge/enclaveforge.h"

namespace fs = std::filesystem;

namespace {

ef_options attack_opts(const char* scenario) {
    ef_options o;
    ef_options_init(&o);
    o.scenario = scenario;
    o.variant = "attack";
    o.seed = 7;
    return o;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

fs::path fresh_dir(const std::string& tag) {
    auto dir = fs::temp_directory_path() / ("ef-capi-" + tag + "-" + std::to_string(::getpid()));
    fs::remove_all(dir);
    return dir;
}

struct CliResult {
    int exit_code;
    std::string out;
};

CliResult run_cli(const std::string& args, const std::string& env = "") {
    std::string cmd = env + EF_CLI_PATH + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    for (size_t n; (n = fread(buf, 1, sizeof buf, pipe)) > 0;) out.append(buf, n);
    int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

}  // namespace

TEST_CASE("capi: defaults and version") {
    ef_options o;
    ef_options_init(&o);
    CHECK(o.scenario == nullptr);
    CHECK(std::string(o.variant) == "benign");
    CHECK(o.seed == 1);
    CHECK(o.clones == 2);
    CHECK(o.clients == 2);
    CHECK(o.noise == 0.0);
    CHECK(std::string(o.mitigation) == "registry");
    CHECK(o.sweep == 0);
    CHECK(std::string(ef_version()) == "0.1.0");
}

TEST_CASE("capi: catalog accessors") {
    REQUIRE(ef_catalog_count() == 6);
    CHECK(std::string(ef_catalog_scenario(0)) == "fim-aria");
    CHECK(std::string(ef_catalog_scenario(5)) == "detector-bench");
    CHECK(ef_catalog_scenario(6) == nullptr);

    std::string text = ef_catalog_text();
    for (size_t i = 0; i < ef_catalog_count(); ++i)
        CHECK(text.find(std::string(ef_catalog_scenario(i)) + ": benign attack mitigated\n") !=
              std::string::npos);
}

TEST_CASE("capi: run reports an attack") {
    ef_report* rep = nullptr;
    auto o = attack_opts("fim-aria");
    REQUIRE(ef_run(&o, &rep) == EF_OK);
    REQUIRE(rep != nullptr);
    CHECK(ef_report_violated(rep) == 1);
    CHECK(ef_report_detected(rep) == 0);
    CHECK(std::string(ef_report_events(rep)).find("launch") != std::string::npos);
    CHECK(std::string(ef_report_table(rep)).empty());
    CHECK(ef_report_trace_count(rep) == 0);

    auto j = nlohmann::json::parse(ef_report_json(rep));
    CHECK(j["scenario"] == "fim-aria");
    CHECK(j["verdict"]["violated"] == true);
    ef_report_free(rep);
}

TEST_CASE("capi: traces come with stable names") {
    ef_report* rep = nullptr;
    auto o = attack_opts("detector-bench");
    REQUIRE(ef_run(&o, &rep) == EF_OK);
    REQUIRE(ef_report_trace_count(rep) == 2);
    CHECK(std::string(ef_report_trace_name(rep, 0)) == "trace.tsv");
    CHECK(std::string(ef_report_trace_name(rep, 1)) == "trace.1.tsv");
    CHECK(std::string(ef_report_trace(rep, 0)).rfind("1\t", 0) == 0);
    CHECK(std::string(ef_report_trace(rep, 2)).empty());
    ef_report_free(rep);
}

TEST_CASE("capi: failures set a status and a message") {
    ef_report* rep = reinterpret_cast<ef_report*>(0x1);

    auto unknown = attack_opts("no-such");
    CHECK(ef_run(&unknown, &rep) == EF_ERR_UNKNOWN_SCENARIO);
    CHECK(rep == nullptr);
    CHECK(std::string(ef_last_error()) != "");

    CHECK(ef_run(nullptr, &rep) == EF_ERR_BAD_ARGS);

    ef_options missing;
    ef_options_init(&missing);
    CHECK(ef_run(&missing, &rep) == EF_ERR_BAD_ARGS);

    auto bad_variant = attack_opts("fim-aria");
    bad_variant.variant = "sideways";
    CHECK(ef_run(&bad_variant, &rep) == EF_ERR_BAD_ARGS);
    CHECK(std::string(ef_last_error()) != "");

    auto good = attack_opts("fim-aria");
    REQUIRE(ef_run(&good, &rep) == EF_OK);
    CHECK(std::string(ef_last_error()) == "");
    ef_report_free(rep);
}

TEST_CASE("capi: report_write lays out the artifact directory") {
    auto dir = fresh_dir("write");
    ef_report* rep = nullptr;
    auto o = attack_opts("detector-bench");
    REQUIRE(ef_run(&o, &rep) == EF_OK);
    REQUIRE(ef_report_write(rep, dir.string().c_str()) == EF_OK);

    CHECK(slurp(dir / "report.json") == ef_report_json(rep));
    CHECK(slurp(dir / "events.log") == ef_report_events(rep));
    CHECK(slurp(dir / "trace.tsv") == ef_report_trace(rep, 0));
    CHECK(slurp(dir / "trace.1.tsv") == ef_report_trace(rep, 1));
    CHECK(!fs::exists(dir / "table.tsv"));
    ef_report_free(rep);

    SUBCASE("sweeps add table.tsv and drop the event log") {
        auto sweep_dir = fresh_dir("sweep");
        o.sweep = 1;
        o.noise = 0.05;
        REQUIRE(ef_run(&o, &rep) == EF_OK);
        REQUIRE(ef_report_write(rep, sweep_dir.string().c_str()) == EF_OK);
        CHECK(slurp(sweep_dir / "table.tsv") == ef_report_table(rep));
        CHECK(!fs::exists(sweep_dir / "events.log"));
        ef_report_free(rep);
        fs::remove_all(sweep_dir);
    }
    fs::remove_all(dir);
}

TEST_CASE("cli: --list matches the catalog") {
    auto r = run_cli("--list");
    CHECK(r.exit_code == 0);
    CHECK(r.out == ef_catalog_text());
}

TEST_CASE("cli: exit codes") {
    CHECK(run_cli("--scenario fim-aria --variant attack --out " +
                  fresh_dir("rc0").string())
              .exit_code == 0);
    CHECK(run_cli("").exit_code == 2);                             // scenario required
    CHECK(run_cli("--scenario fim-aria --variant x").exit_code == 2);
    CHECK(run_cli("--no-such-flag").exit_code == 2);
    CHECK(run_cli("--scenario no-such").exit_code == 3);
    CHECK(run_cli("--help").exit_code == 0);
}

TEST_CASE("cli: writes artifacts under --out and honors the env fallback") {
    auto dir = fresh_dir("out");
    auto r = run_cli("--scenario forkvs-pkvs --variant attack --seed 11 --out " + dir.string());
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("violated=true") != std::string::npos);
    CHECK(fs::exists(dir / "report.json"));
    CHECK(fs::exists(dir / "events.log"));

    auto j = nlohmann::json::parse(slurp(dir / "report.json"));
    CHECK(j["variant"] == "attack");
    CHECK(j["config"]["seed"] == 11);
    fs::remove_all(dir);

    auto env_dir = fresh_dir("env");
    auto e = run_cli("--scenario forkvs-pkvs --variant benign",
                     "ENCLAVE_FORGE_OUT=" + env_dir.string() + " ");
    CHECK(e.exit_code == 0);
    CHECK(fs::exists(env_dir / "report.json"));
    fs::remove_all(env_dir);
}

TEST_CASE("cli: sweep prints the table") {
    auto dir = fresh_dir("cli-sweep");
    auto r = run_cli("--scenario bug-proxy --variant attack --clients 4 --sweep --out " +
                     dir.string());
    CHECK(r.exit_code == 0);
    CHECK(r.out.rfind("clones\tviolated\tdetected\tmin_anonymity\tmax_anonymity\n", 0) == 0);
    CHECK(r.out.find("\n4\ttrue\tfalse\t1\t1\n") != std::string::npos);
    CHECK(r.out.rfind(slurp(dir / "table.tsv"), 0) == 0);  // stdout leads with the table
    fs::remove_all(dir);
}
