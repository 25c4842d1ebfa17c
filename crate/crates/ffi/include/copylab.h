#ifndef COPYLAB_H
#define COPYLAB_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CopylabStatus {
  COPYLAB_STATUS_OK = 0,
  COPYLAB_STATUS_NULL_ARGUMENT = 1,
  COPYLAB_STATUS_INVALID_UTF8 = 2,
  COPYLAB_STATUS_PARSE_ERROR = 3,
  COPYLAB_STATUS_INVALID_ARGUMENT = 4,
  COPYLAB_STATUS_INTERNAL = 5,
} CopylabStatus;

typedef enum CopylabKind {
  COPYLAB_KIND_KOLMOGOROV = 0,
  COPYLAB_KIND_GOEDEL_GENTZEN = 1,
  COPYLAB_KIND_KURODA = 2,
  COPYLAB_KIND_KRIVINE = 3,
  COPYLAB_KIND_VEE_F = 4,
  COPYLAB_KIND_SUBST_F = 5,
} CopylabKind;

typedef enum CopylabVerdict {
  COPYLAB_VERDICT_PROVED = 0,
  COPYLAB_VERDICT_REFUTED = 1,
  COPYLAB_VERDICT_UNKNOWN = 2,
} CopylabVerdict;

typedef enum CopylabEquiv {
  COPYLAB_EQUIV_EQUIVALENT = 0,
  COPYLAB_EQUIV_NOT_EQUIVALENT = 1,
  COPYLAB_EQUIV_UNKNOWN = 2,
} CopylabEquiv;

/**
 * Opaque formula handle.
 */
typedef struct CopylabFormula CopylabFormula;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses `text` into a new handle stored in `*out`.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum CopylabStatus copylab_parse(const char *text, struct CopylabFormula **out);

/**
 * # Safety
 * `f` must come from this library and not have been freed; null is ignored.
 */
void copylab_formula_free(struct CopylabFormula *f);

/**
 * # Safety
 * `s` must be a string returned by this library; null is ignored.
 */
void copylab_string_free(char *s);

/**
 * Concrete syntax of `f`, re-parseable by `copylab_parse`.
 *
 * # Safety
 * `f` must be a live handle and `out` a valid pointer.
 */
enum CopylabStatus copylab_print(const struct CopylabFormula *f, char **out);

/**
 * Translation of `f`. `param_f` is the parameter for `VeeF` and `SubstF`;
 * null selects the default. It must be null for the other kinds.
 *
 * # Safety
 * `f` must be a live handle, `param_f` a live handle or null, `out` valid.
 * `kind` must be one of the `CopylabKind` enumerators.
 */
enum CopylabStatus copylab_translate(const struct CopylabFormula *f,
                                     enum CopylabKind kind,
                                     const struct CopylabFormula *param_f,
                                     struct CopylabFormula **out);

/**
 * Classical provability of `f`. When `cert_json` is not null it receives the
 * outcome with its certificate as JSON.
 *
 * # Safety
 * `f` must be a live handle, `verdict` valid, `cert_json` valid or null.
 */
enum CopylabStatus copylab_prove_classical(const struct CopylabFormula *f,
                                           uint32_t bound,
                                           enum CopylabVerdict *verdict,
                                           char **cert_json);

/**
 * Intuitionistic provability of `f` from no hypotheses; as `copylab_prove_classical`.
 *
 * # Safety
 * `f` must be a live handle, `verdict` valid, `cert_json` valid or null.
 */
enum CopylabStatus copylab_prove_il(const struct CopylabFormula *f,
                                    uint32_t bound,
                                    enum CopylabVerdict *verdict,
                                    char **cert_json);

/**
 * Intuitionistic equivalence of `a` and `b`.
 *
 * # Safety
 * `a`, `b` must be live handles and `out` valid.
 */
enum CopylabStatus copylab_il_equiv(const struct CopylabFormula *a,
                                    const struct CopylabFormula *b,
                                    uint32_t bound,
                                    enum CopylabEquiv *out);

/**
 * Distinctness report for `f` (null for the default) as JSON, and whether it passes.
 * `witness` selects the nullary witness atom; null picks one.
 *
 * # Safety
 * `f` and `witness` must be live handles or null; `json` and `passed` valid.
 */
enum CopylabStatus copylab_theorem_json(const struct CopylabFormula *f,
                                        const struct CopylabFormula *witness,
                                        uint32_t bound,
                                        char **json,
                                        bool *passed);

/**
 * Message for the last failed call on this thread, empty after a success.
 * The pointer stays valid until the next call into the library on this thread.
 */
const char *copylab_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* COPYLAB_H */
