/*
 * C interface to the temporal-logic tracking library.
 *
 * Conventions:
 *  - Handles are opaque; free them with the matching *_free call.
 *  - Functions that can fail take (int *err, char *errbuf, size_t errlen).
 *    On failure they return NULL / nonzero, set *err to a TLT_ERR_* code, and
 *    write a NUL-terminated message into errbuf (truncated to errlen).
 *  - char* returns are heap strings; release them with tlt_string_free.
 *  - All calls are thread safe; a mission handle may be shared by concurrent
 *    runs (each run owns its own state).
 */
#ifndef TLTRACK_H
#define TLTRACK_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#define TLT_OK 0
#define TLT_ERR_MISSION 1 /* valid input, but the mission cannot be planned or failed */
#define TLT_ERR_INPUT 2   /* unreadable or malformed input */

typedef struct tlt_mission tlt_mission;
typedef struct tlt_result tlt_result;

/* Library version string, static storage. */
const char* tlt_version(void);

/* Default run configuration as a JSON object, static storage. */
const char* tlt_default_config_json(void);

/* Parse a mission from a JSON file / from JSON text. */
tlt_mission* tlt_mission_load(const char* path, int* err, char* errbuf, size_t errlen);
tlt_mission* tlt_mission_load_str(const char* text, int* err, char* errbuf, size_t errlen);
void tlt_mission_free(tlt_mission* m);

/*
 * Plan only: automaton, chosen path, sub-problem list as JSON.
 * config_json may be NULL for the default configuration.
 */
char* tlt_mission_plan_json(const tlt_mission* m, const char* config_json, int* err,
                            char* errbuf, size_t errlen);

/*
 * Plan and execute the mission. use_seed nonzero makes `seed` override the
 * config seed. A completed run returns a result handle even when the mission
 * verdict is a failure; *err is TLT_OK then.
 */
tlt_result* tlt_run(const tlt_mission* m, const char* config_json, long long seed, int use_seed,
                    int* err, char* errbuf, size_t errlen);

/* 1 when the mission verdict is success, 0 otherwise. */
int tlt_result_verdict(const tlt_result* r);

char* tlt_result_summary_json(const tlt_result* r);
char* tlt_result_manifest_json(const tlt_result* r);

/* Write the step-by-step trace as CSV. Returns TLT_OK or an error code. */
int tlt_result_save_trace_csv(const tlt_result* r, const char* path, char* errbuf, size_t errlen);

/* Write tracking_error.dat and control.dat under out_dir from the trace. */
int tlt_result_write_plot_data(const tlt_result* r, const char* out_dir, char* errbuf,
                               size_t errlen);

void tlt_result_free(tlt_result* r);

/*
 * Run a named property suite (barrier | ltl | trigger | learning | mission).
 * Returns a human/machine-readable report ("PASS suite.check ..." lines, one
 * per check); *pass is 1 when every check passed. as_json nonzero returns the
 * structured JSON report instead.
 */
char* tlt_verify_suite(const char* suite, int as_json, int* pass, int* err, char* errbuf,
                       size_t errlen);

/* Regenerate plot-data files from a saved trace CSV. Returns TLT_OK or error. */
int tlt_replot(const char* trace_csv, const char* out_dir, char* errbuf, size_t errlen);

void tlt_string_free(char* s);

#ifdef __cplusplus
}
#endif

#endif /* TLTRACK_H */
