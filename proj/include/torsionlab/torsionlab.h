/* C interface to the torsionlab core.
 *
 * Every function returns a tl_status. On failure the message is available
 * from tl_last_error() until the next call on the same thread. Strings
 * returned through char** belong to the caller and are released with
 * tl_string_free(). Rationals cross the boundary as text ("3/2", "inf").
 * Optional text arguments may be NULL.
 */
#ifndef TORSIONLAB_H
#define TORSIONLAB_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define TL_API __declspec(dllexport)
#else
#define TL_API __attribute__((visibility("default")))
#endif

typedef enum tl_status {
  TL_OK = 0,
  TL_INVALID_ARGUMENT = 1,
  TL_CONSTRAINT_VIOLATED = 2,
  TL_PRECISION_EXHAUSTED = 3,
  TL_ZERO_DIVISION = 4,
  TL_NOT_A_COMPLEX = 5,
  TL_FIBER_ON_BOUNDARY = 6,
  TL_EMPTY_INTERIOR = 7,
  TL_STEP_FAILURE = 8,
  TL_UNBOUNDED_DOMAIN = 9,
  TL_NON_COMPACT = 10,
  TL_PARSE = 11,
  TL_INTERNAL = 99
} tl_status;

TL_API const char* tl_version(void);
TL_API const char* tl_last_error(void);
TL_API const char* tl_status_name(tl_status status);
TL_API void tl_string_free(char* s);

/* Novikov ring elements. */
typedef struct tl_novikov tl_novikov;

TL_API tl_status tl_novikov_parse(const char* text, const char* trunc, tl_novikov** out);
TL_API void tl_novikov_free(tl_novikov* x);
TL_API tl_status tl_novikov_format(const tl_novikov* x, char** out);
TL_API tl_status tl_novikov_valuation(const tl_novikov* x, char** out);
TL_API tl_status tl_novikov_add(const tl_novikov* x, const tl_novikov* y, tl_novikov** out);
TL_API tl_status tl_novikov_mul(const tl_novikov* x, const tl_novikov* y, tl_novikov** out);
TL_API tl_status tl_novikov_invert(const tl_novikov* x, tl_novikov** out);
TL_API tl_status tl_novikov_divide(const tl_novikov* x, const tl_novikov* y, tl_novikov** out);

/* Matrices over the valuation ring, from {"rows","cols","entries","trunc"}. */
typedef struct tl_matrix tl_matrix;

TL_API tl_status tl_matrix_from_json(const char* json, const char* trunc, tl_matrix** out);
TL_API void tl_matrix_free(tl_matrix* m);
TL_API tl_status tl_matrix_to_json(const tl_matrix* m, char** out);
TL_API tl_status tl_snf_report(const tl_matrix* m, char** report);

/* Cochain complexes, from {"ranks","differentials","trunc"}. degree < 0 selects
 * the sum over all degrees; hofer may be NULL. */
TL_API tl_status tl_decompose_report(const char* complex_json, const char* trunc, long degree, const char* hofer,
                                     char** report);

/* Toric moment models: shorthand ("sphere:3/2*cp:2:10*cylinder"), inline JSON or "@file". */
typedef struct tl_model tl_model;

TL_API tl_status tl_model_parse(const char* text, tl_model** out);
TL_API void tl_model_free(tl_model* m);
TL_API tl_status tl_model_describe(const tl_model* m, char** out);
TL_API tl_status tl_model_to_json(const tl_model* m, char** out);

/* fiber: comma-separated rationals. */
TL_API tl_status tl_torsion_report(const tl_model* m, const char* fiber, const char* trunc, const char* hofer,
                                   char** report);
/* cap may be NULL; required when a coordinate is unbounded. */
TL_API tl_status tl_optimize_report(const tl_model* m, size_t resolution, const char* cap, const char* trunc,
                                    char** report);

typedef struct tl_polydisk_args {
  const char* mode;   /* "1.3", "1.4", "1.5" */
  long n;
  long k;             /* 0: default */
  const char* S;
  const char* eps;    /* NULL: default */
  const char* eps2;   /* NULL: default */
  const char* lambda; /* NULL: default */
  int extrapolate;
  const char* trunc;
} tl_polydisk_args;

TL_API tl_status tl_polydisk_report(const tl_polydisk_args* args, char** report);

typedef struct tl_verify_args {
  const char* suite;  /* "actiondiff", "energy", "hofer", "hat" */
  uint64_t seed;
  size_t resolution;  /* cells per unit length */
  double tol;         /* <= 0: suite default */
  size_t cases;       /* 0: suite default */
  int convergence;
  double flow_step;   /* <= 0: 1e-3 */
  size_t threads;     /* 0: hardware concurrency */
} tl_verify_args;

/* A completed run returns TL_OK whether or not the suite passed; read "pass". */
TL_API tl_status tl_verify_report(const tl_verify_args* args, char** report);

#ifdef __cplusplus
}
#endif

#endif /* TORSIONLAB_H */
