#ifndef GEOMECH_H
#define GEOMECH_H

/* C interface to the geomech toolkit. Every function returns a gm_status;
 * on failure gm_last_error() describes the problem for the calling thread.
 * Strings handed out by the library are released with gm_string_free. */

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define GM_API __declspec(dllexport)
#else
#define GM_API __attribute__((visibility("default")))
#endif

typedef enum gm_status {
  GM_OK = 0,
  GM_INVALID_ARGUMENT = 1,
  GM_PARSE = 2,
  GM_UNKNOWN_IDENTIFIER = 3,
  GM_DOMAIN = 4,
  GM_DIMENSION = 5,
  GM_PRECONDITION = 6,
  GM_NUMERIC = 7,
  GM_NOT_FOUND = 8,
  GM_SPEC = 9,
  GM_INTERNAL = 10
} gm_status;

typedef enum gm_verdict { GM_FAIL = 0, GM_PASS = 1 } gm_verdict;

typedef struct gm_system gm_system;
typedef struct gm_expr gm_expr;

GM_API const char* gm_version(void);
GM_API const char* gm_status_string(gm_status s);
/* Message of the last failing call on this thread; "" when none. */
GM_API const char* gm_last_error(void);
GM_API void gm_string_free(char* s);

GM_API gm_status gm_system_load_file(const char* path, gm_system** out);
GM_API gm_status gm_system_load_string(const char* text, const char* source, gm_system** out);
GM_API void gm_system_free(gm_system* sys);
/* JSON array of the subcommand names. */
GM_API gm_status gm_commands(char** json_out);

/* Run a subcommand. `options_json` is a JSON object (may be NULL). On GM_OK
 * and GM_PRECONDITION the report is stored in *report_out and *verdict set. */
GM_API gm_status gm_run(const gm_system* sys, const char* command, const char* options_json, char** report_out,
                        gm_verdict* verdict);

/* Expressions over the coordinate names in `names` (count `n`). */
GM_API gm_status gm_expr_parse(const char* text, const char* const* names, size_t n, gm_expr** out);
GM_API gm_status gm_expr_eval(const gm_expr* e, const double* x, size_t n, double* out);
GM_API gm_status gm_expr_diff(const gm_expr* e, size_t index, gm_expr** out);
GM_API gm_status gm_expr_to_string(const gm_expr* e, char** out);
GM_API void gm_expr_free(gm_expr* e);

#ifdef __cplusplus
}
#endif

#endif
