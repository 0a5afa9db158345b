#include <enclaveforge/enclaveforge.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>

#include <CLI11.hpp>

int main(int argc, char** argv) {
    CLI::App app{"deterministic enclave clone-attack simulator"};
    std::string scenario, variant = "benign", mitigation = "registry", out_dir;
    uint64_t seed = 1;
    uint32_t clones = 2, clients = 2;
    double noise = 0.0;
    bool sweep = false, list = false;

    app.add_option("--scenario", scenario, "scenario to run (see --list)");
    app.add_option("--variant", variant, "benign, attack, or mitigated")
        ->check(CLI::IsMember({"benign", "attack", "mitigated"}));
    app.add_option("--seed", seed, "simulation seed");
    app.add_option("--clones", clones, "enclave instances in attack/mitigated runs")
        ->check(CLI::Range(1u, 64u));
    app.add_option("--clients", clients, "clients issuing requests")
        ->check(CLI::Range(1u, 26u));
    app.add_option("--noise", noise, "cache noise rate")->check(CLI::Range(0.0, 1.0));
    app.add_option("--mitigation", mitigation, "registry or detector")
        ->check(CLI::IsMember({"registry", "detector"}));
    app.add_option("--out", out_dir, "output directory (default $ENCLAVE_FORGE_OUT or .)");
    app.add_flag("--sweep", sweep, "run the scenario's parameter sweep");
    app.add_flag("--list", list, "list scenarios and exit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : EF_ERR_BAD_ARGS;
    }

    if (list) {
        std::fputs(ef_catalog_text(), stdout);
        return EF_OK;
    }
    if (scenario.empty()) {
        std::fprintf(stderr, "error: --scenario is required (try --list)\n");
        return EF_ERR_BAD_ARGS;
    }
    if (out_dir.empty()) {
        const char* env = std::getenv("ENCLAVE_FORGE_OUT");
        out_dir = env && *env ? env : ".";
    }

    ef_options opts;
    ef_options_init(&opts);
    opts.scenario = scenario.c_str();
    opts.variant = variant.c_str();
    opts.seed = seed;
    opts.clones = clones;
    opts.clients = clients;
    opts.noise = noise;
    opts.mitigation = mitigation.c_str();
    opts.sweep = sweep ? 1 : 0;

    auto t0 = std::chrono::steady_clock::now();
    ef_report* rep = nullptr;
    ef_status st = ef_run(&opts, &rep);
    if (st != EF_OK) {
        std::fprintf(stderr, "error: %s\n", ef_last_error());
        return st;
    }
    st = ef_report_write(rep, out_dir.c_str());
    if (st != EF_OK) {
        std::fprintf(stderr, "error: %s\n", ef_last_error());
        ef_report_free(rep);
        return st;
    }

    if (sweep) {
        std::fputs(ef_report_table(rep), stdout);
    } else {
        std::printf("%s/%s seed=%llu: violated=%s detected=%s\n", scenario.c_str(),
                    variant.c_str(), static_cast<unsigned long long>(seed),
                    ef_report_violated(rep) ? "true" : "false",
                    ef_report_detected(rep) ? "true" : "false");
    }
    std::printf("wrote %s/report.json\n", out_dir.c_str());

    auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0);
    std::fprintf(stderr, "wall time: %.1f ms\n", ms.count());
    ef_report_free(rep);
    return EF_OK;
}
