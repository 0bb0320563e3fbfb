/* C interface to the pmod persistence-module library. */

#ifndef PMOD_H
#define PMOD_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code of every fallible call.
 */
typedef enum PmodStatus {
  PmodStatus_Ok = 0,
  PmodStatus_NullPointer = 1,
  PmodStatus_InvalidUtf8 = 2,
  PmodStatus_ParseError = 3,
  PmodStatus_ParamError = 4,
  PmodStatus_DimensionError = 5,
  PmodStatus_OrderError = 6,
  PmodStatus_StabilityError = 7,
  PmodStatus_ValidationError = 8,
  PmodStatus_ResourceError = 9,
  PmodStatus_UsageError = 10,
  PmodStatus_PreconditionError = 11,
  PmodStatus_IoError = 12,
} PmodStatus;

/**
 * Canonical certificate construction selector.
 */
typedef enum PmodCanonicalKind {
  PmodCanonicalKind_Shift = 0,
  PmodCanonicalKind_Pixel = 1,
  PmodCanonicalKind_Gf = 2,
  PmodCanonicalKind_Fg = 3,
} PmodCanonicalKind;

typedef struct PmodBarcode PmodBarcode;

typedef struct PmodCertificate PmodCertificate;

typedef struct PmodModule PmodModule;

typedef struct PmodPresentation PmodPresentation;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread; valid until the next
 * failing call on the same thread.
 */
const char *pmod_last_error_message(void);

/**
 * Releases a string returned by this library.
 *
 * # Safety
 * `s` must have been returned by a `pmod_*` function and not freed yet.
 */
void pmod_string_free(char *s);

/**
 * Releases a module handle.
 *
 * # Safety
 * The handle must come from this library and not be freed twice.
 */
void pmod_module_free(struct PmodModule *handle);

/**
 * Releases a barcode handle.
 *
 * # Safety
 * The handle must come from this library and not be freed twice.
 */
void pmod_barcode_free(struct PmodBarcode *handle);

/**
 * Releases a presentation handle.
 *
 * # Safety
 * The handle must come from this library and not be freed twice.
 */
void pmod_presentation_free(struct PmodPresentation *handle);

/**
 * Releases a certificate handle.
 *
 * # Safety
 * The handle must come from this library and not be freed twice.
 */
void pmod_certificate_free(struct PmodCertificate *handle);

/**
 * Parses the `pmod v1` text format.
 *
 * # Safety
 * `text` is a NUL-terminated string; `out` points to writable memory.
 */
enum PmodStatus pmod_module_parse(const char *text, struct PmodModule **out);

/**
 * Serializes a module back to its canonical text.
 *
 * # Safety
 * `module` is a live handle from this library.
 */
char *pmod_module_to_text(const struct PmodModule *module);

/**
 * Dimension of the evaluation at an exact rational point.
 *
 * # Safety
 * Pointer arguments as in [`pmod_module_parse`]; `out_dim` is writable.
 */
enum PmodStatus pmod_module_eval(const struct PmodModule *module,
                                 const char *point,
                                 uintptr_t *out_dim);

/**
 * Shift: evaluation at q becomes evaluation at p+q.
 *
 * # Safety
 * Pointer arguments follow the crate-level conventions.
 */
enum PmodStatus pmod_module_translate(const struct PmodModule *module,
                                      const char *shift,
                                      struct PmodModule **out);

/**
 * Sample a real module at (n+1)·ε into a natural module.
 *
 * # Safety
 * Pointer arguments follow the crate-level conventions.
 */
enum PmodStatus pmod_module_discretize(const struct PmodModule *module,
                                       const char *epsilon,
                                       struct PmodModule **out);

/**
 * Spread a natural module out as x ↦ N(⌊x/ε⌋+1).
 *
 * # Safety
 * Pointer arguments follow the crate-level conventions.
 */
enum PmodStatus pmod_module_realify(const struct PmodModule *module,
                                    const char *epsilon,
                                    struct PmodModule **out);

/**
 * Discretize then realify.
 *
 * # Safety
 * Pointer arguments follow the crate-level conventions.
 */
enum PmodStatus pmod_module_compose_gf(const struct PmodModule *module,
                                       const char *epsilon,
                                       struct PmodModule **out);

/**
 * Realify then discretize.
 *
 * # Safety
 * Pointer arguments follow the crate-level conventions.
 */
enum PmodStatus pmod_module_compose_fg(const struct PmodModule *module,
                                       const char *epsilon,
                                       struct PmodModule **out);

/**
 * Pixelization: constant on the lattice cells `[x0+kε, x0+(k+1)ε)`.
 *
 * # Safety
 * Pointer arguments follow the crate-level conventions.
 */
enum PmodStatus pmod_module_pixelize(const struct PmodModule *module,
                                     const char *x0,
                                     const char *epsilon,
                                     struct PmodModule **out);

/**
 * True iff every structure map strictly below `x0` is an isomorphism.
 *
 * # Safety
 * Pointer arguments follow the crate-level conventions.
 */
enum PmodStatus pmod_module_is_lower_stable(const struct PmodModule *module,
                                            const char *x0,
                                            bool *out_stable);

/**
 * Parses the `barcode v1` text format.
 *
 * # Safety
 * Pointer arguments follow the crate-level conventions.
 */
enum PmodStatus pmod_barcode_parse(const char *text, struct PmodBarcode **out);

/**
 * Serializes a barcode.
 *
 * # Safety
 * `barcode` is a live handle from this library.
 */
char *pmod_barcode_to_text(const struct PmodBarcode *barcode);

/**
 * Interval decomposition of a module.
 *
 * # Safety
 * Pointer arguments follow the crate-level conventions.
 */
enum PmodStatus pmod_module_decompose(const struct PmodModule *module, struct PmodBarcode **out);

/**
 * Direct sum of interval modules over 𝔽_field.
 *
 * # Safety
 * Pointer arguments follow the crate-level conventions.
 */
enum PmodStatus pmod_barcode_to_module(const struct PmodBarcode *barcode,
                                       uint64_t field,
                                       struct PmodModule **out);

/**
 * Exact bottleneck distance, written as a rational string or `"inf"`.
 *
 * # Safety
 * Pointer arguments follow the crate-level conventions.
 */
enum PmodStatus pmod_bottleneck_distance(const struct PmodBarcode *left,
                                         const struct PmodBarcode *right,
                                         char **out_distance);

/**
 * Parses the `grmod v1` text format.
 *
 * # Safety
 * Pointer arguments follow the crate-level conventions.
 */
enum PmodStatus pmod_presentation_parse(const char *text, struct PmodPresentation **out);

/**
 * Serializes a presentation.
 *
 * # Safety
 * `presentation` is a live handle from this library.
 */
char *pmod_presentation_to_text(const struct PmodPresentation *presentation);

/**
 * Minimal graded presentation of a natural module.
 *
 * # Safety
 * Pointer arguments follow the crate-level conventions.
 */
enum PmodStatus pmod_module_to_graded(const struct PmodModule *module,
                                      struct PmodPresentation **out);

/**
 * Natural module presented by generators and relations; a negative
 * horizon means "largest degree + 1".
 *
 * # Safety
 * Pointer arguments follow the crate-level conventions.
 */
enum PmodStatus pmod_presentation_to_module(const struct PmodPresentation *presentation,
                                            int64_t horizon,
                                            struct PmodModule **out);

/**
 * Parses the `cert v1` text format. Module references by path resolve
 * against the current directory; inline modules need no filesystem.
 *
 * # Safety
 * Pointer arguments follow the crate-level conventions.
 */
enum PmodStatus pmod_certificate_parse(const char *text, struct PmodCertificate **out);

/**
 * Serializes a certificate with both modules inline.
 *
 * # Safety
 * `certificate` is a live handle from this library.
 */
char *pmod_certificate_to_text(const struct PmodCertificate *certificate);

/**
 * Builds one of the canonical certificates for `module`; `x0` may be null
 * except for the pixel construction (defaults to 0).
 *
 * # Safety
 * Pointer arguments follow the crate-level conventions.
 */
enum PmodStatus pmod_certificate_canonical(const struct PmodModule *module,
                                           enum PmodCanonicalKind kind,
                                           const char *epsilon,
                                           const char *x0,
                                           struct PmodCertificate **out);

/**
 * Runs the strong or weak verifier according to the certificate's kind.
 * On rejection `out_accepted` is false and, when `out_witness` is
 * non-null, it receives a one-line description of the witness.
 *
 * # Safety
 * Pointer arguments follow the crate-level conventions.
 */
enum PmodStatus pmod_certificate_verify(const struct PmodCertificate *certificate,
                                        bool *out_accepted,
                                        char **out_witness);

/**
 * Promotes a verified weak certificate to a strong one at twice the shift.
 *
 * # Safety
 * Pointer arguments follow the crate-level conventions.
 */
enum PmodStatus pmod_certificate_promote(const struct PmodCertificate *certificate,
                                         struct PmodCertificate **out);

/**
 * Exhaustive search for a strong ε-interleaving over 𝔽₂ within `budget`.
 *
 * # Safety
 * Pointer arguments follow the crate-level conventions.
 */
enum PmodStatus pmod_brute_force_exists(const struct PmodModule *left,
                                        const struct PmodModule *right,
                                        const char *epsilon,
                                        uint64_t budget,
                                        bool *out_exists);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PMOD_H */
