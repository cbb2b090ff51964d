/*
 * stlshield — C API for the STL-shielded learning simulator.
 *
 * A task specification written in a bounded temporal logic (operators
 * F[a,b], G[a,b], U[a,b] over region-membership and affine predicates) is
 * enforced on a learning agent by composing the policy action with a
 * corrective control from a sequential control-barrier-function QP.
 *
 * All objects are opaque handles; every function returns ss_status and the
 * last error message is available per thread via ss_last_error(). Strings
 * returned through char** are heap-allocated; release them with
 * ss_string_free().
 */
#ifndef STLSHIELD_H
#define STLSHIELD_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ss_status {
    SS_OK = 0,
    SS_ERR_PARSE = 1,          /* syntax error (message carries the position) */
    SS_ERR_INTERVAL = 2,       /* interval upper bound below lower bound */
    SS_ERR_STRATIFICATION = 3, /* formula violates the grammar levels */
    SS_ERR_UNSUPPORTED = 4,    /* task shape has no obligation encoding */
    SS_ERR_SHORT_TRAJECTORY = 5,
    SS_ERR_MISSING_SIGNAL = 6,
    SS_ERR_ARGUMENT = 7,
    SS_ERR_CONFIG = 8,
    SS_ERR_IO = 9,
    SS_ERR_INFEASIBLE = 10,
    SS_ERR_RUNTIME = 11
} ss_status;

const char* ss_status_name(ss_status status);

/* Message describing the most recent failure on this thread. */
const char* ss_last_error(void);

void ss_string_free(char* s);

const char* ss_version(void);

/* ---- formulas ---------------------------------------------------------- */

typedef struct ss_formula ss_formula;

/* Grammar (whitespace free-form):
 *   formula  = clause { ("&" | "|") clause }        & binds tighter than |
 *   clause   = ("G"|"F") "[" a "," b "]" clause
 *            | "U" "[" a "," b "]" "(" formula "," formula ")"
 *            | "(" formula ")" | atom
 *   atom     = "in(" name ")" | "!" atom | affine
 *   affine   = e.g. "x1 >= 0", "2*x1 - x2 + 0.5 <= 0"
 */
ss_status ss_formula_parse(const char* text, ss_formula** out);
void ss_formula_free(ss_formula* f);

/* Canonical rendering; parsing it back yields a structurally equal formula. */
ss_status ss_formula_print(const ss_formula* f, char** out);

/* Future time needed to decide the formula. */
ss_status ss_formula_horizon(const ss_formula* f, double* out);

/* Human-readable summary of the visit obligations and avoidance constraints
 * the enforcement layer extracts from the formula. */
ss_status ss_formula_obligations(const ss_formula* f, char** out);

/* ---- offline monitoring ------------------------------------------------ */

/* Evaluates a specification over a trajectory CSV
 * (header: t,x1,x2[,region_<name>_cx,region_<name>_cy ...]).
 * config_path may be NULL for affine-only specs; otherwise its world block
 * supplies region shapes (and centers of static regions missing from the
 * CSV). verdict receives 1/0; report (optional) receives the text report. */
ss_status ss_monitor_csv(const char* spec_text, const char* csv_path, const char* config_path,
                         int* verdict, char** report);

/* ---- experiments ------------------------------------------------------- */

typedef struct ss_experiment ss_experiment;

ss_status ss_experiment_load_file(const char* path, ss_experiment** out);
ss_status ss_experiment_load_json(const char* json_text, ss_experiment** out);
void ss_experiment_free(ss_experiment* e);

/* Dot-path override, e.g. ("eval.episodes", "500"). Values parse as JSON and
 * fall back to plain strings. */
ss_status ss_experiment_set(ss_experiment* e, const char* dot_key, const char* value);

/* Validates the configuration; on success writes a summary (normalized spec,
 * obligations, warnings) into *summary when non-NULL. */
ss_status ss_experiment_validate(ss_experiment* e, char** summary);

/* Trains (when configured) and evaluates, writing episode CSVs, the learning
 * curve, report.json and SVG plots under out_dir (NULL: the config's
 * output.dir). *report_json receives the run report. asserts_ok (optional)
 * receives 1 when the config's assert thresholds held. */
ss_status ss_experiment_run(ss_experiment* e, const char* out_dir, char** report_json,
                            int* asserts_ok);

/* Re-renders every SVG plot that the CSVs in run_dir support. */
ss_status ss_plot_render(const char* run_dir);

#ifdef __cplusplus
}
#endif

#endif /* STLSHIELD_H */
