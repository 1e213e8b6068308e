#ifndef TBSIM_H
#define TBSIM_H

/* C interface to the time-bin Bell-distribution simulator. All entry points
 * are exception-free: failures come back as status codes and the message is
 * retrievable through tbsim_last_error() (thread-local). */

#include <stdint.h>

#if defined(_WIN32)
#  if defined(TBSIM_BUILD)
#    define TBSIM_API __declspec(dllexport)
#  else
#    define TBSIM_API __declspec(dllimport)
#  endif
#else
#  define TBSIM_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef struct tbsim_config tbsim_config; /* opaque experiment configuration */
typedef struct tbsim_result tbsim_result; /* opaque run result */

typedef enum tbsim_status {
  TBSIM_OK = 0,
  TBSIM_ERROR_INVALID_ARGUMENT = 1,
  TBSIM_ERROR_PARSE = 2,
  TBSIM_ERROR_INTERNAL = 3
} tbsim_status;

TBSIM_API const char* tbsim_version(void);

/* Message for the most recent failure on this thread; empty string if none. */
TBSIM_API const char* tbsim_last_error(void);

/* --- configuration ------------------------------------------------------ */

/* Parse a JSON config document. On success *out owns a new config. */
TBSIM_API tbsim_status tbsim_config_parse(const char* json_text, tbsim_config** out);

/* Built-in defaults for "distribute", "repeater", "sweep", or "compare-kwd". */
TBSIM_API tbsim_status tbsim_config_default(const char* kind, tbsim_config** out);

TBSIM_API void tbsim_config_free(tbsim_config* config);

TBSIM_API tbsim_status tbsim_config_set_trials(tbsim_config* config, uint64_t trials);
TBSIM_API tbsim_status tbsim_config_set_seed(tbsim_config* config, uint64_t seed);
/* format is "csv" or "json". */
TBSIM_API tbsim_status tbsim_config_set_format(tbsim_config* config, const char* format);

/* Static strings; NULL config yields NULL. */
TBSIM_API const char* tbsim_config_kind(const tbsim_config* config);
TBSIM_API const char* tbsim_config_format(const tbsim_config* config);

/* Canonical JSON serialization; *out must be released with tbsim_string_free. */
TBSIM_API tbsim_status tbsim_config_to_json(const tbsim_config* config, char** out);

TBSIM_API void tbsim_string_free(char* text);

/* --- execution ----------------------------------------------------------- */

/* Run the configured experiment. Deterministic: the CSV of two runs with the
 * same config is byte-identical. */
TBSIM_API tbsim_status tbsim_run(const tbsim_config* config, tbsim_result** out);

TBSIM_API void tbsim_result_free(tbsim_result* result);

/* Rendered outputs; *out must be released with tbsim_string_free. */
TBSIM_API tbsim_status tbsim_result_csv(const tbsim_result* result, char** out);
TBSIM_API tbsim_status tbsim_result_json(const tbsim_result* result, char** out);

/* 1 when every statistical consistency band held, 0 when one was violated,
 * negative on invalid arguments. */
TBSIM_API int tbsim_result_check(const tbsim_result* result);

/* Newline-separated violation messages (empty string when check passed). */
TBSIM_API tbsim_status tbsim_result_check_messages(const tbsim_result* result, char** out);

/* --- closed-form predictions --------------------------------------------- */

/* cos^2(theta1) * cos^2(theta2): post-selection success of the distribution. */
TBSIM_API double tbsim_analytic_success_prob(double theta1, double theta2);

/* zeta * p_source * cos^2(theta1) * cos^2(theta2). */
TBSIM_API double tbsim_p_pur(double zeta, double p_source, double theta1, double theta2);

/* (1-gamma) * zeta * p_source^5 * eta^8 * p_cnot^2 * p_qnd. */
TBSIM_API double tbsim_p_pur_kwd(double gamma, double zeta, double p_source, double eta,
                                 double p_cnot, double p_qnd);

/* eta^2 / 2. */
TBSIM_API double tbsim_swap_success_prob(double eta);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* TBSIM_H */
