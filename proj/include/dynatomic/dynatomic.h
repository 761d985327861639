#ifndef DYNATOMIC_DYNATOMIC_H
#define DYNATOMIC_DYNATOMIC_H

/*
 * C interface to the dynatomic library: dynatomic forms for the maps
 * z -> z / (a z^d + b), rational preperiodic portraits and bounded-height sweeps.
 *
 * Every call returns a dyn_status. Strings returned through char** are owned by
 * the caller and released with dyn_string_free. On failure the context keeps a
 * message readable through dyn_last_error until the next call on that context.
 * A context must not be used from two threads at once; distinct contexts may be.
 */

#include <stddef.h>

#if defined(_WIN32)
#  if defined(DYN_BUILDING_LIBRARY)
#    define DYN_API __declspec(dllexport)
#  else
#    define DYN_API __declspec(dllimport)
#  endif
#else
#  define DYN_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum dyn_status {
  DYN_OK = 0,
  DYN_E_ARGUMENT = 1,
  DYN_E_INEXACT_DIVISION = 2,
  DYN_E_BUDGET = 3,
  DYN_E_INTERNAL = 4,
  DYN_E_PARSE = 5,
  DYN_E_IO = 6,
  DYN_E_NULL = 7
} dyn_status;

typedef enum dyn_format { DYN_FORMAT_TEXT = 0, DYN_FORMAT_JSON = 1 } dyn_format;

enum {
  DYN_CHECK_CYCLES = 1,
  DYN_CHECK_PREPER = 2,
  DYN_CHECK_PAIRS = 4,
  DYN_CHECK_RATIONAL = 8,
  DYN_CHECK_ALL = 15
};

typedef struct dyn_context dyn_context;
typedef struct dyn_map dyn_map;
typedef struct dyn_report dyn_report;

typedef struct dyn_portrait_limits {
  unsigned n_max;
  unsigned depth;
  size_t node_budget;
  unsigned max_iter;
  unsigned height_bits_cap;
} dyn_portrait_limits;

/* Called once per finished sweep record with one line of JSON (no newline). */
typedef void (*dyn_record_callback)(const char* json, void* user);

DYN_API const char* dyn_version(void);
DYN_API const char* dyn_status_name(dyn_status status);

DYN_API dyn_status dyn_context_create(dyn_context** out);
DYN_API void dyn_context_destroy(dyn_context* ctx);
DYN_API const char* dyn_last_error(const dyn_context* ctx);
DYN_API void dyn_string_free(char* s);

/* Degree budget for d^n in the recurrences, shared by the whole process; 0 restores the default. */
DYN_API dyn_status dyn_set_degree_budget(dyn_context* ctx, unsigned long long budget);

/* nu_d(n) as a decimal string. */
DYN_API dyn_status dyn_nu(dyn_context* ctx, unsigned d, unsigned n, char** out);
/* Canonical text of the plain form in X, Y with coefficients in a, b. */
DYN_API dyn_status dyn_dynatomic_text(dyn_context* ctx, unsigned d, unsigned n, char** out);
/* Canonical text of the tilde form in x, y with coefficients in b. */
DYN_API dyn_status dyn_tilde_dynatomic_text(dyn_context* ctx, unsigned d, unsigned n, char** out);
DYN_API dyn_status dyn_verify_lemma1(dyn_context* ctx, unsigned d, unsigned n, int* holds);
DYN_API dyn_status dyn_verify_bridge(dyn_context* ctx, unsigned d, unsigned n, int* holds);
/* Edge coefficients of the tilde form: text lines or a JSON object. */
DYN_API dyn_status dyn_edge_coeffs(dyn_context* ctx, unsigned d, unsigned n, dyn_format format, char** out,
                                   int* holds);

/* a and b are rationals written "r/s" or as integers. */
DYN_API dyn_status dyn_map_create(dyn_context* ctx, unsigned d, const char* a, const char* b, dyn_map** out);
/* b = sigma p^e. If b is non-null it must agree with the triple. */
DYN_API dyn_status dyn_map_create_p(dyn_context* ctx, unsigned d, const char* a, const char* b, const char* p,
                                    unsigned e, int sigma, dyn_map** out);
DYN_API void dyn_map_destroy(dyn_map* map);
DYN_API dyn_status dyn_map_label(dyn_context* ctx, const dyn_map* map, char** out);

/* Points are "inf" or rationals. */
DYN_API dyn_status dyn_map_apply(dyn_context* ctx, const dyn_map* map, const char* z, char** out);
DYN_API dyn_status dyn_orbit(dyn_context* ctx, const dyn_map* map, const char* z, unsigned max_iter,
                             unsigned height_bits_cap, dyn_format format, char** out);
DYN_API dyn_status dyn_preimages(dyn_context* ctx, const dyn_map* map, const char* t, dyn_format format, char** out);

DYN_API void dyn_portrait_limits_init(dyn_portrait_limits* limits);
/* limits may be null for the defaults. */
DYN_API dyn_status dyn_portrait(dyn_context* ctx, const dyn_map* map, const dyn_portrait_limits* limits,
                                dyn_format format, char** out);

/* Polynomials are given by ascending rational coefficients c_0 .. c_{n-1}. */
DYN_API dyn_status dyn_newton_polygon(dyn_context* ctx, const char* const* coeffs, size_t count, const char* p,
                                      dyn_format format, char** out);
DYN_API dyn_status dyn_rational_roots(dyn_context* ctx, const char* const* coeffs, size_t count, dyn_format format,
                                      char** out);

/* Runs a sweep described by grid text (key = value lines). jobs = 0 uses every core. */
DYN_API dyn_status dyn_sweep(dyn_context* ctx, const char* grid_text, unsigned checks, unsigned jobs,
                             dyn_record_callback callback, void* user, dyn_report** out);
DYN_API void dyn_report_destroy(dyn_report* report);
DYN_API size_t dyn_report_record_count(const dyn_report* report);
DYN_API size_t dyn_report_violation_count(const dyn_report* report);
DYN_API dyn_status dyn_report_summary_json(dyn_context* ctx, const dyn_report* report, char** out);
DYN_API dyn_status dyn_report_jsonl(dyn_context* ctx, const dyn_report* report, char** out);
DYN_API dyn_status dyn_report_csv(dyn_context* ctx, const dyn_report* report, char** out);
DYN_API dyn_status dyn_report_violations(dyn_context* ctx, const dyn_report* report, char** out);

#ifdef __cplusplus
}
#endif

#endif
