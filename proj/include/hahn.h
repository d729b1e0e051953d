#ifndef HAHN_H
#define HAHN_H

/*
 * C interface to the library. Every object is an opaque handle released with
 * its *_free function. Functions return a hahn_status; on failure a message is
 * available from hahn_last_error() on the calling thread until its next call.
 *
 * Report-producing calls still hand back a report when the checks fail
 * (status HAHN_VERIFY_FAILED), so that the residuals can be inspected.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define HAHN_API __declspec(dllexport)
#else
#define HAHN_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hahn_status {
  HAHN_OK = 0,
  HAHN_VERIFY_FAILED = 1,  /* a report was produced and some check failed */
  HAHN_E_INPUT = 2,        /* malformed text, parameter out of range, bad path */
  HAHN_E_DEGENERATE = 3,   /* degenerate mathematical input (vanishing jet, real a) */
  HAHN_E_THEOREM_CASE = 4, /* the factors belong to another case of the classification */
  HAHN_E_REGION = 5,       /* evaluation outside the analyticity region */
  HAHN_E_NUMERIC = 6,      /* a numerical tripwire fired */
  HAHN_E_INTERNAL = 7
} hahn_status;

typedef struct hahn_report hahn_report;
typedef struct hahn_expr hahn_expr;

HAHN_API const char* hahn_version(void);
HAHN_API const char* hahn_last_error(void);
HAHN_API const char* hahn_status_name(hahn_status status);

/* Domain descriptors: disc | plane | cstar | pdisc | annulus:<r>, optionally affine(<s>;<b>):<model>. */
HAHN_API hahn_status hahn_classify(const char* d1, const char* d2, hahn_report** out);

/* disc_pair_json: {"comp1": expr, "comp2": expr, "target1": descriptor, "target2": descriptor}. */
HAHN_API hahn_status hahn_injectivize(const char* disc_pair_json, double theta, uint64_t seed, hahn_report** out);

/* a: complex literal such as "0.0+0.5i", or NULL for the default sweep. */
HAHN_API hahn_status hahn_counterexample(const char* d1, const char* d2, const char* a, hahn_report** out);

/* suite: auts | coverings | metrics | injectivize | counterexample | all. */
HAHN_API hahn_status hahn_verify(const char* suite, uint64_t seed, hahn_report** out);

/* Strings stay valid until hahn_report_free. */
HAHN_API const char* hahn_report_json(const hahn_report* report);
HAHN_API const char* hahn_report_table(const hahn_report* report);
HAHN_API int hahn_report_passed(const hahn_report* report);
HAHN_API void hahn_report_free(hahn_report* report);

HAHN_API hahn_status hahn_expr_parse(const char* text, hahn_expr** out);
/* Writes value, first and second derivative as (re, im) pairs into out[0..5]. */
HAHN_API hahn_status hahn_expr_eval(const hahn_expr* expr, double re, double im, double out[6]);
/* Canonical text; valid until hahn_expr_free. */
HAHN_API const char* hahn_expr_render(const hahn_expr* expr);
HAHN_API void hahn_expr_free(hahn_expr* expr);

#ifdef __cplusplus
}
#endif

#endif /* HAHN_H */
