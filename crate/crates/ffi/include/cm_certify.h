#ifndef CM_CERTIFY_H
#define CM_CERTIFY_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result code of every fallible call.
typedef enum CmError {
  CM_OK = 0,
  CM_NULL_POINTER = 1,
  CM_INVALID_UTF8 = 2,
  CM_PARSE = 3,
  CM_INVALID_ARGUMENT = 4,
  CM_UNKNOWN_ID = 5,
  CM_ARITY = 6,
  CM_PANIC = 7,
} CmError;

// Outcome of a certification.
typedef enum CmStatus {
  CM_NONNEGATIVE = 0,
  CM_NEGATIVE_WITNESS = 1,
  CM_BUDGET_EXHAUSTED = 2,
} CmStatus;

// Opaque certificate.
typedef struct CmCertificate CmCertificate;

// Opaque polynomial with integer coefficients.
typedef struct CmPolynomial CmPolynomial;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or null. Valid until the
// next call into the library.
const char *cm_last_error(void);

// # Safety
// `s` must be null or a string returned by this library.
void cm_string_free(char *s);

// Parses the text format: one `<coeff> <e1> ... <ek>` line per monomial.
//
// # Safety
// `text` must be a NUL-terminated string and `out` a valid pointer.
enum CmError cm_poly_parse(const char *text, struct CmPolynomial **out);

// The Cayley-Menger determinant `f` in the six edge lengths.
//
// # Safety
// `out` must be a valid pointer.
enum CmError cm_poly_cayley_menger(struct CmPolynomial **out);

// `a * D_beta f + b * f`; `beta` is an edge list such as `"12,34"` or `"K4"`.
//
// # Safety
// `beta` must be a NUL-terminated string and `out` a valid pointer.
enum CmError cm_poly_combination(const char *beta, int64_t a, int64_t b, struct CmPolynomial **out);

// # Safety
// `p` must be null or a handle from this library, not yet freed.
void cm_poly_free(struct CmPolynomial *p);

// Number of variables, or 0 for a null handle.
//
// # Safety
// `p` must be null or a live handle.
size_t cm_poly_nvars(const struct CmPolynomial *p);

// Canonical text form of the polynomial.
//
// # Safety
// `p` must be a live handle and `out` a valid pointer.
enum CmError cm_poly_to_text(const struct CmPolynomial *p, char **out);

// Exact value at an integer point, as a decimal string.
//
// # Safety
// `point` must hold `len` values; `p` must be live and `out` valid.
enum CmError cm_poly_eval(const struct CmPolynomial *p,
                          const int64_t *point,
                          size_t len,
                          char **out);

// Pulls a six-variable polynomial back to the unit 5-cube through the named
// simplex (`"C_21"`, `"D_3111"`, ...).
//
// # Safety
// `p` must be live, `simplex` NUL-terminated and `out` valid.
enum CmError cm_poly_pullback_named(const struct CmPolynomial *p,
                                    const char *simplex,
                                    struct CmPolynomial **out);

// Pull-back through a simplex given as 36 integers, six per vertex, in order.
//
// # Safety
// `vertices` must point to 36 values; `p` must be live and `out` valid.
enum CmError cm_poly_pullback(const struct CmPolynomial *p,
                              const int64_t *vertices,
                              struct CmPolynomial **out);

// Runs the positive dominance algorithm on a five-variable polynomial.
//
// # Safety
// `p` must be live and `out` valid.
enum CmError cm_certify(const struct CmPolynomial *p,
                        uint64_t budget,
                        bool parallel,
                        struct CmCertificate **out);

// # Safety
// `c` must be a live certificate.
enum CmStatus cm_certificate_status(const struct CmCertificate *c);

// Steps taken, or 0 for a null handle.
//
// # Safety
// `c` must be null or a live certificate.
uint64_t cm_certificate_steps(const struct CmCertificate *c);

// Text report: status, steps, depth and the witness if any.
//
// # Safety
// `c` must be live and `out` valid.
enum CmError cm_certificate_report(const struct CmCertificate *c, char **out);

// # Safety
// `c` must be null or a certificate from this library, not yet freed.
void cm_certificate_free(struct CmCertificate *c);

// Runs a named case; writes its text report and whether it passed.
//
// # Safety
// `name` must be NUL-terminated; `report` and `passed` must be valid.
enum CmError cm_run_case(const char *name, uint64_t seed, char **report, bool *passed);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CM_CERTIFY_H */
