#ifndef PQREDUCE_H
#define PQREDUCE_H
/*
 * Stable C API of the reduction/verification engine (libpqreduce).
 *
 * Every call returns a pqr_status; outputs are written through pointers.
 * A human-readable message for the most recent failing call on the current
 * thread is available via pqr_last_error_message(). Reports are opaque
 * handles owned by the caller (release with pqr_report_free); rendered text
 * buffers must be released with pqr_string_free.
 */

#include <stdint.h>

#if defined(_WIN32)
#define PQR_API __declspec(dllexport)
#else
#define PQR_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum pqr_status {
  PQR_OK = 0,
  PQR_ERR_INVALID_PARAMS = 1,
  PQR_ERR_SINGULAR_ELEMENT = 2,
  PQR_ERR_SINGULAR_SET = 3,
  PQR_ERR_DEGENERATE_PLANE = 4,
  PQR_ERR_PROJECTION = 5,
  PQR_ERR_SAMPLING = 6,
  PQR_ERR_CHART = 7,
  PQR_ERR_NUMERIC = 8,
  PQR_ERR_IO = 9,
  PQR_ERR_INTERNAL = 10
} pqr_status;

typedef enum pqr_format { PQR_FORMAT_JSON = 0, PQR_FORMAT_CSV = 1 } pqr_format;

/* Library version ("major.minor.patch"); never returns NULL. */
PQR_API const char* pqr_version_string(void);

/* Message of the last failing call on this thread ("" when none). */
PQR_API const char* pqr_last_error_message(void);

/*
 * Closed-form Jacobi spectrum of the para pipeline at squared Killing norm
 * n2 for coprime weights (p,q). convention is +1 or -1 (the sign the model
 * constant enters the operator with; -1 reproduces the printed family).
 * out_eigs receives (l1, l2, l3); out_trace_combo (optional) l3 + 2 l1.
 */
PQR_API pqr_status pqr_closed_spectrum(int p, int q, int convention,
                                       double n2, double out_eigs[3],
                                       double* out_trace_combo);

/* Quaternionic closed-form spectrum at squared Killing norm V2 > 0. */
PQR_API pqr_status pqr_gl_spectrum(int p, int q, double V2,
                                   double out_eigs[3]);

/* Global sectional-curvature bounds of the quaternionic quotient. */
PQR_API pqr_status pqr_gl_sectional_bounds(int p, int q, double* out_lo,
                                           double* out_hi);

/* *out_positive = 1 iff the quotient has strictly positive curvature. */
PQR_API pqr_status pqr_gl_positivity(int p, int q, int* out_positive);

/* Pinching bounds; PQR_ERR_INVALID_PARAMS outside the positive regime. */
PQR_API pqr_status pqr_gl_pinching(int p, int q, double* out_lo,
                                   double* out_hi);

/* Opaque verification/spectrum/gl report. */
typedef struct pqr_report pqr_report;

typedef struct pqr_verify_options {
  int p;
  int q;
  int points;
  int jobs;
  uint64_t seed;
  double tol_closed;   /* <= 0 selects the default 1e-9 */
  double tol_fd;       /* <= 0 selects the default 1e-3 */
  double tol_einstein; /* <= 0 selects the default 1e-3 */
} pqr_verify_options;

typedef struct pqr_gl_options {
  int p;
  int q;
  int sweep_max;  /* > 0: table over all coprime pairs <= sweep_max */
  int crosscheck; /* nonzero: run the numeric pipeline crosscheck */
  int points;     /* crosscheck sample count */
  uint64_t seed;
} pqr_gl_options;

/* Full verification suite (closed vs matrix vs FD, Einstein, Osserman,
 * duality, non-homogeneity). */
PQR_API pqr_status pqr_run_verify(const pqr_verify_options* options,
                                  pqr_report** out_report);

/* Eigenvalue table; points = 0 renders the n^2 grid, > 0 samples K. */
PQR_API pqr_status pqr_run_spectrum(int p, int q, int points, uint64_t seed,
                                    pqr_report** out_report);

/* Positivity/bounds/pinching table with optional crosscheck. */
PQR_API pqr_status pqr_run_gl(const pqr_gl_options* options,
                              pqr_report** out_report);

/* Process exit code encoded in the report: 0 pass, 1 failed check,
 * 3 sampling/chart failure rate above 20%. Returns -1 on NULL. */
PQR_API int pqr_report_exit_code(const pqr_report* report);

/* Renders the report; *out_text is NUL-terminated, free with
 * pqr_string_free. */
PQR_API pqr_status pqr_report_render(const pqr_report* report,
                                     pqr_format format, char** out_text);

PQR_API void pqr_string_free(char* text);
PQR_API void pqr_report_free(pqr_report* report);

#ifdef __cplusplus
}
#endif

#endif /* PQREDUCE_H */
