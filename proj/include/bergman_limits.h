#ifndef BERGMAN_LIMITS_H
#define BERGMAN_LIMITS_H

/* C interface of the bergman_limits shared library. Handles are opaque; every call
 * returns a bl_status and stores a message for bl_last_error() on failure. */

#include <stddef.h>

#if defined(__GNUC__)
#define BL_API __attribute__((visibility("default")))
#else
#define BL_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  BL_OK = 0,
  BL_INVALID_ARGUMENT = 1,
  BL_PARSE = 2,
  BL_NOT_ADMISSIBLE = 3,
  BL_ACCURACY = 4,
  BL_OUTSIDE_DOMAIN = 5,
  BL_DIMENSION_MISMATCH = 6,
  BL_INTERNAL = 7,
  BL_VERIFY_FAILED = 8,
  BL_IO = 9
} bl_status;

typedef struct bl_domain bl_domain;
typedef struct bl_operator bl_operator;

BL_API const char* bl_version(void);
/* Message of the last failed call on this thread; empty after a successful one. */
BL_API const char* bl_last_error(void);

/* name: disk, ball2, ball3, ball4, matrix. */
BL_API bl_status bl_domain_create(const char* name, bl_domain** out);
BL_API void bl_domain_free(bl_domain* dom);
/* Complex dimension; matrix-ball points are (z11, z12, z21, z22). */
BL_API int bl_domain_dim(const bl_domain* dom);

/* Points are passed as interleaved (re, im) pairs, 2 * dim doubles. */
BL_API bl_status bl_h(const bl_domain* dom, const double* z, const double* w, double out[2]);
BL_API bl_status bl_phi(const bl_domain* dom, const double* z, const double* w, double* out);
BL_API bl_status bl_distance(const bl_domain* dom, const double* z, const double* w, double* out);

/* Truncated Toeplitz operator T_f on A^p_nu with polynomials of degree <= max_degree. */
BL_API bl_status bl_toeplitz_create(const bl_domain* dom, double nu, double p, int max_degree,
                                    const char* symbol, bl_operator** out);
BL_API void bl_operator_free(bl_operator* op);
BL_API int bl_operator_size(const bl_operator* op);
BL_API bl_status bl_operator_norm(const bl_operator* op, double* out);
BL_API bl_status bl_berezin(const bl_operator* op, const double* z, double out[2]);
/* B(A) along the shell, at most `capacity` (re, im) pairs; *count receives the full size. */
BL_API bl_status bl_berezin_shell(const bl_operator* op, double t_min, double t_max, int grid, double* out,
                                  size_t capacity, size_t* count);

/* Runs a batch command (spectrum, verify, compactness, fredholm, band) from a JSON
 * configuration; writes its files and returns the process exit code in *exit_code.
 * The summary (written files or the error) is valid until the next call on this thread. */
BL_API bl_status bl_run_command(const char* config_json, int* exit_code, const char** summary);

#ifdef __cplusplus
}
#endif

#endif
