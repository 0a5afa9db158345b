#ifndef ENCLAVEFORGE_H
#define ENCLAVEFORGE_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes double as process exit codes for the bundled CLI. */
typedef enum ef_status {
    EF_OK = 0,
    EF_ERR_BAD_ARGS = 2,
    EF_ERR_UNKNOWN_SCENARIO = 3,
    EF_ERR_IO = 4,
    EF_ERR_INTERNAL = 5
} ef_status;

typedef struct ef_options {
    const char* scenario;   /* required, see ef_catalog_scenario */
    const char* variant;    /* "benign" | "attack" | "mitigated" */
    uint64_t seed;
    uint32_t clones;
    uint32_t clients;
    double noise;           /* cache noise rate, 0..1 */
    const char* mitigation; /* "registry" | "detector", mitigated variant only */
    int sweep;              /* nonzero: run the scenario's parameter sweep */
} ef_options;

/* Fills in the defaults (variant "benign", seed 1, 2 clones, 2 clients,
 * noise 0, mitigation "registry", sweep off). */
void ef_options_init(ef_options* opts);

typedef struct ef_report ef_report;

/* Runs one scenario (or its sweep) and hands back a report. The report is
 * owned by the caller; release it with ef_report_free. *out is null on
 * failure and ef_last_error describes what went wrong. */
ef_status ef_run(const ef_options* opts, ef_report** out);

int ef_report_violated(const ef_report* rep);
int ef_report_detected(const ef_report* rep);

/* Borrowed pointers, valid until ef_report_free. Absent sections return "". */
const char* ef_report_json(const ef_report* rep);
const char* ef_report_events(const ef_report* rep);
const char* ef_report_table(const ef_report* rep);
size_t ef_report_trace_count(const ef_report* rep);
const char* ef_report_trace(const ef_report* rep, size_t idx);
const char* ef_report_trace_name(const ef_report* rep, size_t idx);

/* Writes report.json plus whichever of events.log, trace*.tsv, table.tsv
 * the run produced into dir (created if missing). */
ef_status ef_report_write(const ef_report* rep, const char* dir);

void ef_report_free(ef_report* rep);

size_t ef_catalog_count(void);
const char* ef_catalog_scenario(size_t idx); /* null past the end */
const char* ef_catalog_text(void);           /* one line per scenario with its variants */

const char* ef_version(void);

/* Message for the most recent failure on this thread, "" if none. */
const char* ef_last_error(void);

#ifdef __cplusplus
}
#endif

#endif /* ENCLAVEFORGE_H */
